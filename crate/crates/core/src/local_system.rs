//! Rank 1 and rank 2 local systems on `C` minus `n` points, given by their
//! puncture monodromies, and the perverse lengths of their extensions across
//! the punctures along the open inclusion `j: U -> C`.
//!
//! The fundamental group of `U` is free on the puncture loops, so a local
//! system is just a tuple of invertible matrices. Lengths of `Rj_*(L[1])` and
//! `Rj_!(L[1])` are additive over a composition series of `L`; for a simple
//! `L` the length is `1 + sum_p dim H^1(U_p, L)`, and `dim H^1(U_p, L)` counts
//! the Jordan blocks with eigenvalue 1 of the monodromy at `p`.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{common_eigenline, eig1_multiplicity, AlgebraError, Mat2, Scalar, Vec2};

pub const REPRESENTATION_HEADER: &str = "# perv representation v1";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LocalSystemError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("a local system needs at least one puncture")]
    NoPunctures,
    #[error("monodromy at puncture {0} is not invertible")]
    NotInvertible(usize),
    #[error("monodromy at puncture {0} does not have determinant 1")]
    NotSpecialLinear(usize),
    #[error("puncture index {index} out of range for {count} punctures")]
    PunctureOutOfRange { index: usize, count: usize },
    #[error("intermediate extension length needs a semisimple local system")]
    NotSemisimple,
    #[error("{0}")]
    Format(String),
}

/// Puncture monodromies of a rank 1 or rank 2 local system.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Monodromies {
    Rank1(Vec<Scalar>),
    Rank2(Vec<Mat2>),
}

impl Monodromies {
    pub fn rank(&self) -> usize {
        match self {
            Monodromies::Rank1(_) => 1,
            Monodromies::Rank2(_) => 2,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Monodromies::Rank1(v) => v.len(),
            Monodromies::Rank2(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `dim H^1` of a small punctured disc around puncture `p`.
    fn h1(&self, p: usize) -> usize {
        match self {
            Monodromies::Rank1(v) => usize::from(v[p].is_one()),
            Monodromies::Rank2(v) => eig1_multiplicity(&v[p]),
        }
    }

    fn disc(&self) -> Result<BigInt, AlgebraError> {
        match self {
            Monodromies::Rank1(v) => Scalar::common_disc(v),
            Monodromies::Rank2(v) => Scalar::common_disc(v.iter().flat_map(|m| m.rows().iter().flatten())),
        }
    }

    fn dual(&self) -> Result<Monodromies, AlgebraError> {
        Ok(match self {
            Monodromies::Rank1(v) => Monodromies::Rank1(v.iter().map(Scalar::checked_inv).collect::<Result<_, _>>()?),
            Monodromies::Rank2(v) => Monodromies::Rank2(
                v.iter()
                    .map(|m| Ok(m.inverse()?.transpose()))
                    .collect::<Result<_, AlgebraError>>()?,
            ),
        })
    }
}

/// A local system on `C` minus `n` points.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Representation {
    monodromies: Monodromies,
    sl2: bool,
}

impl Representation {
    /// Checks invertibility, a common coefficient field, and determinant 1
    /// at every puncture when `sl2` is set.
    pub fn new(monodromies: Monodromies, sl2: bool) -> Result<Self, LocalSystemError> {
        if monodromies.is_empty() {
            return Err(LocalSystemError::NoPunctures);
        }
        monodromies.disc()?;
        for p in 0..monodromies.len() {
            let det = match &monodromies {
                Monodromies::Rank1(v) => v[p].clone(),
                Monodromies::Rank2(v) => v[p].det(),
            };
            if det.is_zero() {
                return Err(LocalSystemError::NotInvertible(p));
            }
            if sl2 && !det.is_one() {
                return Err(LocalSystemError::NotSpecialLinear(p));
            }
        }
        Ok(Representation { monodromies, sl2 })
    }

    pub fn rank1(values: Vec<Scalar>) -> Result<Self, LocalSystemError> {
        Self::new(Monodromies::Rank1(values), false)
    }

    /// Rank 2 with the SL2 constraint asserted.
    pub fn sl2(mats: Vec<Mat2>) -> Result<Self, LocalSystemError> {
        Self::new(Monodromies::Rank2(mats), true)
    }

    pub fn gl2(mats: Vec<Mat2>) -> Result<Self, LocalSystemError> {
        Self::new(Monodromies::Rank2(mats), false)
    }

    pub fn n_punctures(&self) -> usize {
        self.monodromies.len()
    }

    pub fn rank(&self) -> usize {
        self.monodromies.rank()
    }

    pub fn is_sl2(&self) -> bool {
        self.sl2
    }

    pub fn monodromies(&self) -> &Monodromies {
        &self.monodromies
    }

    /// Rank 2 monodromy matrices, `None` for rank 1.
    pub fn matrices(&self) -> Option<&[Mat2]> {
        match &self.monodromies {
            Monodromies::Rank2(v) => Some(v),
            Monodromies::Rank1(_) => None,
        }
    }

    /// The dual local system (inverse transpose monodromies).
    pub fn dual(&self) -> Result<Representation, LocalSystemError> {
        Ok(Representation {
            monodromies: self.monodromies.dual()?,
            sl2: self.sl2,
        })
    }
}

/// One simple subquotient in a composition series.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompositionFactor {
    pub position: usize,
    pub monodromies: Monodromies,
}

impl CompositionFactor {
    pub fn rank(&self) -> usize {
        self.monodromies.rank()
    }

    /// The factor as a local system in its own right; rank 1 factors of an
    /// SL2 system are not SL1, so the SL2 flag is kept only for rank 2.
    pub fn to_representation(&self, sl2: bool) -> Representation {
        Representation {
            monodromies: self.monodromies.clone(),
            sl2: sl2 && self.rank() == 2,
        }
    }
}

/// Composition series of `rep`: a rank 2 system with an invariant line splits
/// as the character on that line followed by the quotient character;
/// otherwise it is simple.
pub fn composition_factors(rep: &Representation) -> Result<Vec<CompositionFactor>, LocalSystemError> {
    let mats = match &rep.monodromies {
        Monodromies::Rank1(_) => {
            return Ok(vec![CompositionFactor {
                position: 0,
                monodromies: rep.monodromies.clone(),
            }])
        }
        Monodromies::Rank2(m) => m,
    };
    let Some(v) = common_eigenline(mats)? else {
        return Ok(vec![CompositionFactor {
            position: 0,
            monodromies: rep.monodromies.clone(),
        }]);
    };
    let (sub, quotient) = split_characters(mats, &v)?;
    Ok(vec![
        CompositionFactor {
            position: 0,
            monodromies: Monodromies::Rank1(sub),
        },
        CompositionFactor {
            position: 1,
            monodromies: Monodromies::Rank1(quotient),
        },
    ])
}

/// Characters on an invariant line `v` and on the quotient by it.
fn split_characters(mats: &[Mat2], v: &Vec2) -> Result<(Vec<Scalar>, Vec<Scalar>), AlgebraError> {
    let k = v.pivot().expect("eigenline is nonzero");
    let mut sub = Vec::with_capacity(mats.len());
    let mut quotient = Vec::with_capacity(mats.len());
    for m in mats {
        let image = m.apply(v)?;
        let lambda = image.0[k].checked_div(&v.0[k])?;
        quotient.push(m.det().checked_div(&lambda)?);
        sub.push(lambda);
    }
    Ok((sub, quotient))
}

/// Number of simple constituents of `rep`.
pub fn local_system_length(rep: &Representation) -> Result<usize, LocalSystemError> {
    Ok(composition_factors(rep)?.len())
}

/// Whether `rep` is a direct sum of simple local systems.
pub fn is_semisimple(rep: &Representation) -> Result<bool, LocalSystemError> {
    let Monodromies::Rank2(mats) = &rep.monodromies else {
        return Ok(true);
    };
    let Some(pivot) = mats.iter().find(|m| !m.is_scalar_matrix()) else {
        return Ok(true);
    };
    if common_eigenline(mats)?.is_none() {
        return Ok(true);
    }
    // reducible: semisimple iff a second invariant line exists, and every
    // invariant line is an eigenline of `pivot`
    let mut invariant = 0;
    for v in pivot.eigenlines()? {
        let mut all = true;
        for m in mats {
            all &= m.preserves_line(&v)?;
        }
        invariant += usize::from(all);
    }
    Ok(invariant == 2)
}

/// Direct sum of the composition factors. Simple and rank 1 inputs come back
/// unchanged; a reducible rank 2 system becomes diagonal.
pub fn semisimplify(rep: &Representation) -> Result<Representation, LocalSystemError> {
    let factors = composition_factors(rep)?;
    if factors.len() == 1 {
        return Ok(rep.clone());
    }
    let (Monodromies::Rank1(sub), Monodromies::Rank1(quot)) = (&factors[0].monodromies, &factors[1].monodromies)
    else {
        unreachable!("reducible rank 2 splits into two characters")
    };
    let mats = sub
        .iter()
        .zip(quot)
        .map(|(a, b)| Mat2::diag(a.clone(), b.clone()))
        .collect::<Result<Vec<_>, _>>()?;
    Representation::new(Monodromies::Rank2(mats), rep.sl2)
}

/// `dim H^1(U_p, L)`: Jordan blocks with eigenvalue 1 of the monodromy at `p`.
pub fn puncture_h1(rep: &Representation, p: usize) -> Result<usize, LocalSystemError> {
    if p >= rep.n_punctures() {
        return Err(LocalSystemError::PunctureOutOfRange {
            index: p,
            count: rep.n_punctures(),
        });
    }
    Ok(rep.monodromies.h1(p))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pushforward {
    /// `Rj_*`
    Star,
    /// `Rj_!`
    Shriek,
}

/// Length of the perverse sheaf `Rj_*(L[1])` or `Rj_!(L[1])` on `C`.
///
/// Both functors are t-exact for the affine inclusion, so the length is the
/// sum over composition factors `F` of `1 + sum_p dim H^1(U_p, F)`. The
/// shriek variant is computed on the dual local system, since Verdier duality
/// exchanges `Rj_!` with `Rj_*` of the dual.
pub fn pushforward_length(rep: &Representation, variant: Pushforward) -> Result<usize, LocalSystemError> {
    let target = match variant {
        Pushforward::Star => rep.clone(),
        Pushforward::Shriek => rep.dual()?,
    };
    let mut total = 0;
    for factor in composition_factors(&target)? {
        total += 1 + (0..target.n_punctures())
            .map(|p| factor.monodromies.h1(p))
            .sum::<usize>();
    }
    Ok(total)
}

/// Length of the intermediate extension `j_!*(L[1])`, which equals the length
/// of `L` for semisimple `L`. Non-semisimple input is rejected.
pub fn ic_length(rep: &Representation) -> Result<usize, LocalSystemError> {
    if !is_semisimple(rep)? {
        return Err(LocalSystemError::NotSemisimple);
    }
    local_system_length(rep)
}

#[derive(Serialize, Deserialize)]
struct RepresentationFile {
    punctures: usize,
    rank: usize,
    sl2: bool,
    matrices: Vec<Vec<Vec<String>>>,
}

impl Representation {
    /// Header line followed by one line of JSON with keys `punctures`,
    /// `rank`, `sl2`, `matrices`; rank 1 monodromies are 1x1 matrices.
    pub fn to_file_string(&self) -> String {
        let matrices = match &self.monodromies {
            Monodromies::Rank1(v) => v.iter().map(|s| vec![vec![s.to_string()]]).collect(),
            Monodromies::Rank2(v) => v
                .iter()
                .map(|m| m.rows().iter().map(|r| r.iter().map(Scalar::to_string).collect()).collect())
                .collect(),
        };
        let file = RepresentationFile {
            punctures: self.n_punctures(),
            rank: self.rank(),
            sl2: self.sl2,
            matrices,
        };
        format!(
            "{REPRESENTATION_HEADER}\n{}\n",
            serde_json::to_string(&file).expect("plain data serializes")
        )
    }

    pub fn from_file_str(text: &str) -> Result<Self, LocalSystemError> {
        let body: String = text
            .lines()
            .map(|l| if l.trim_start().starts_with('#') { "" } else { l })
            .collect::<Vec<_>>()
            .join("\n");
        let file: RepresentationFile =
            serde_json::from_str(&body).map_err(|e| LocalSystemError::Format(e.to_string()))?;
        let fmt_err = |msg: String| LocalSystemError::Format(msg);
        if file.matrices.len() != file.punctures {
            return Err(fmt_err(format!(
                "punctures: {} but {} matrices given",
                file.punctures,
                file.matrices.len()
            )));
        }
        if file.rank != 1 && file.rank != 2 {
            return Err(fmt_err(format!("rank: expected 1 or 2, found {}", file.rank)));
        }
        let mut scalars = Vec::new();
        for (i, m) in file.matrices.iter().enumerate() {
            if m.len() != file.rank || m.iter().any(|row| row.len() != file.rank) {
                return Err(fmt_err(format!("matrices[{i}]: expected a {0}x{0} matrix", file.rank)));
            }
            let mut entries = Vec::new();
            for (r, row) in m.iter().enumerate() {
                for (c, s) in row.iter().enumerate() {
                    let v = s
                        .parse::<Scalar>()
                        .map_err(|e| fmt_err(format!("matrices[{i}][{r}][{c}]: {e}")))?;
                    entries.push(v);
                }
            }
            scalars.push(entries);
        }
        let monodromies = if file.rank == 1 {
            Monodromies::Rank1(scalars.into_iter().map(|mut e| e.remove(0)).collect())
        } else {
            let mats = scalars
                .into_iter()
                .enumerate()
                .map(|(i, e)| {
                    let [a, b, c, d]: [Scalar; 4] = e.try_into().expect("2x2 checked above");
                    Mat2::new(a, b, c, d).map_err(|err| fmt_err(format!("matrices[{i}]: {err}")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            Monodromies::Rank2(mats)
        };
        Representation::new(monodromies, file.sl2)
    }
}
