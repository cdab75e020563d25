//! The SL2 character variety of the free group on two generators in the
//! trace coordinates `x = tr A`, `y = tr B`, `z = tr AB`, and the loci where
//! the length of `Rj_*(L[1])` jumps.

use std::fmt;

use thiserror::Error;

use crate::algebra::{AlgebraError, Mat2, RadicalSum, Scalar};
use crate::constructible::{simplify_conjunction, PolyAtom, PolyConstructibleSet};
use crate::formula::Formula;
use crate::local_system::{LocalSystemError, Representation};
use crate::poly::Poly;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TraceError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    LocalSystem(#[from] LocalSystemError),
    #[error("trace coordinates need an SL2 rank 2 local system with two punctures")]
    Shape,
    #[error("no representation over a single quadratic field: {0}")]
    Unrepresentable(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TracePoint {
    pub x: Scalar,
    pub y: Scalar,
    pub z: Scalar,
}

impl TracePoint {
    pub fn new(x: Scalar, y: Scalar, z: Scalar) -> Self {
        TracePoint { x, y, z }
    }

    pub fn from_ints(x: i64, y: i64, z: i64) -> Self {
        Self::new(x.into(), y.into(), z.into())
    }

    pub fn coords(&self) -> Vec<Scalar> {
        vec![self.x.clone(), self.y.clone(), self.z.clone()]
    }

    fn radical_coords(&self) -> Vec<RadicalSum> {
        [&self.x, &self.y, &self.z].map(Scalar::to_radical).to_vec()
    }
}

impl fmt::Display for TracePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.x, self.y, self.z)
    }
}

pub fn trace_vars() -> Vec<String> {
    ["x", "y", "z"].map(String::from).to_vec()
}

/// `z^2 - xyz + x^2 + y^2 - 4`, vanishing exactly at the reducible points.
pub fn discriminant_poly() -> Poly {
    let v = |i| Poly::var(3, i);
    let (x, y, z) = (v(0), v(1), v(2));
    z.mul(&z)
        .sub(&x.mul(&y).mul(&z))
        .add(&x.mul(&x))
        .add(&y.mul(&y))
        .sub(&Poly::from_int(3, 4))
}

/// `(tr A, tr B, tr AB)`.
pub fn trace_coords(rep: &Representation) -> Result<TracePoint, TraceError> {
    match rep.matrices() {
        Some([a, b]) if rep.is_sl2() => Ok(TracePoint::new(a.trace(), b.trace(), a.mul(b)?.trace())),
        _ => Err(TraceError::Shape),
    }
}

/// The discriminant as a scalar; fails only when the coordinates come from
/// two different quadratic fields (use [`is_reducible_point`] then).
pub fn discriminant(t: &TracePoint) -> Result<Scalar, TraceError> {
    let (x, y, z) = (&t.x, &t.y, &t.z);
    Scalar::common_disc([x, y, z])?;
    Ok(z * z - x * y * z + x * x + y * y - Scalar::from_int(4))
}

/// Whether the semisimple representation with traces `t` is reducible.
pub fn is_reducible_point(t: &TracePoint) -> bool {
    discriminant_poly().eval(&t.radical_coords()).is_zero()
}

/// Closed-form length on a stratum: `1 + [x=2] + [y=2]` off the reducible
/// locus, `2 + 2[x=2] + 2[y=2]` on it.
pub fn length_for_pattern(reducible: bool, x_is_two: bool, y_is_two: bool) -> usize {
    let jumps = usize::from(x_is_two) + usize::from(y_is_two);
    if reducible {
        2 + 2 * jumps
    } else {
        1 + jumps
    }
}

/// Length of `Rj_*(L[1])` for the semisimple `L` with trace coordinates `t`.
pub fn length_from_traces(t: &TracePoint) -> usize {
    length_for_pattern(is_reducible_point(t), t.x.is_int(2), t.y.is_int(2))
}

fn tower(e: impl fmt::Display) -> TraceError {
    TraceError::Unrepresentable(e.to_string())
}

/// Eigenvalue `λ` with `λ + 1/λ = trace`.
fn eigenvalue_for_trace(trace: &Scalar) -> Result<Scalar, AlgebraError> {
    let root = (trace.square() - Scalar::from_int(4)).sqrt()?;
    trace.checked_add(&root)?.checked_div(&Scalar::from_int(2))
}

/// Irreducible pair with `tr A = x = ±2`: `A` unipotent up to sign.
fn irreducible_parabolic(x: &Scalar, y: &Scalar, z: &Scalar) -> Result<(Mat2, Mat2), AlgebraError> {
    let eps = x.checked_div(&Scalar::from_int(2))?;
    let a = Mat2::new(eps.clone(), Scalar::one(), Scalar::zero(), eps.clone())?;
    // tr AB = c + eps*y, and c != 0 off the reducible locus
    let c = z.checked_sub(&eps.checked_mul(y)?)?;
    let b = Mat2::new(Scalar::zero(), -c.checked_inv()?, c, y.clone())?;
    Ok((a, b))
}

/// Irreducible pair with `A` diagonalized over the splitting field of `x^2-4`.
fn irreducible_split(x: &Scalar, y: &Scalar, z: &Scalar) -> Result<(Mat2, Mat2), AlgebraError> {
    let lambda = eigenvalue_for_trace(x)?;
    let inv = lambda.checked_inv()?;
    Scalar::common_disc([&lambda, y, z])?;
    let a = Mat2::diag(lambda.clone(), inv.clone())?;
    // tr AB = λa + λ⁻¹(y - a) = z
    let p = (z - &inv * y).checked_div(&(&lambda - &inv))?;
    let q = y - &p;
    let b = Mat2::new(p.clone(), Scalar::one(), &p * &q - Scalar::one(), q)?;
    Ok((a, b))
}

/// A semisimple SL2 representation with trace coordinates `t`.
///
/// Off the reducible locus the result is irreducible; on it, a pair of
/// diagonal matrices. At most one quadratic extension of the field of `t` is
/// introduced; points needing two are reported as unrepresentable.
pub fn rep_from_traces(t: &TracePoint) -> Result<Representation, TraceError> {
    let (x, y, z) = (&t.x, &t.y, &t.z);
    Scalar::common_disc([x, y, z]).map_err(tower)?;
    let pair = if is_reducible_point(t) {
        reducible_pair(x, y, z)?
    } else if x.is_int(2) || x.is_int(-2) {
        irreducible_parabolic(x, y, z).map_err(tower)?
    } else if y.is_int(2) || y.is_int(-2) {
        let (b, a) = irreducible_parabolic(y, x, z).map_err(tower)?;
        (a, b)
    } else {
        match irreducible_split(x, y, z) {
            Ok(p) => p,
            Err(_) => {
                let (b, a) = irreducible_split(y, x, z).map_err(tower)?;
                (a, b)
            }
        }
    };
    let rep = Representation::sl2(vec![pair.0, pair.1])?;
    debug_assert_eq!(trace_coords(&rep).as_ref(), Ok(t));
    Ok(rep)
}

fn reducible_pair(x: &Scalar, y: &Scalar, z: &Scalar) -> Result<(Mat2, Mat2), TraceError> {
    let lambda = eigenvalue_for_trace(x).map_err(tower)?;
    let mu = eigenvalue_for_trace(y).map_err(tower)?;
    for m in [mu.clone(), mu.checked_inv()?] {
        let Ok(prod) = lambda.checked_mul(&m) else {
            return Err(tower(format!("eigenvalues {lambda} and {m} lie in different fields")));
        };
        if (&prod + &prod.inv()).checked_sub(z).map_err(tower)?.is_zero() {
            let a = Mat2::diag(lambda.clone(), lambda.inv())?;
            let b = Mat2::diag(m.clone(), m.inv())?;
            return Ok((a, b));
        }
    }
    unreachable!("on the reducible locus one of λμ, λ/μ has trace z")
}

fn linear_atom(var: usize, value: i64) -> PolyAtom {
    PolyAtom::new(&Poly::var(3, var).sub(&Poly::from_int(3, value))).expect("non-constant")
}

/// `{t : length_from_traces(t) >= k}` as a union of conjunctions.
///
/// The length depends only on which of `Δ = 0`, `x = 2`, `y = 2` hold, so the
/// locus is a union of cells of that pattern. Because the length is monotone
/// in each condition the union is an up-set, written through its minimal
/// cells; each conjunction is then simplified by substituting the linear
/// conditions into `Δ`.
pub fn stratify(k: usize) -> PolyConstructibleSet {
    let disc = PolyAtom::new(&discriminant_poly()).expect("non-constant");
    // bit 0: x = 2, bit 1: y = 2, bit 2: Δ = 0
    let atoms = [linear_atom(0, 2), linear_atom(1, 2), disc];
    let len = |mask: usize| length_for_pattern(mask & 4 != 0, mask & 1 != 0, mask & 2 != 0);
    let up: Vec<usize> = (0..8).filter(|&m| len(m) >= k).collect();
    let is_upset = up.iter().all(|&m| (0..8).all(|n| n & m != m || up.contains(&n)));

    let conj = |mask: usize, negate_rest: bool| -> Formula<PolyAtom> {
        let chosen: Vec<PolyAtom> = (0..3).filter(|b| mask >> b & 1 == 1).map(|b| atoms[b].clone()).collect();
        let positive = match simplify_conjunction(&chosen) {
            Some(simple) => Formula::all(simple.into_iter().map(Formula::Leaf)),
            None => Formula::False,
        };
        if !negate_rest {
            return positive;
        }
        let negs = (0..3).filter(|b| mask >> b & 1 == 0).map(|b| Formula::Leaf(atoms[b].clone()).not());
        Formula::all(std::iter::once(positive).chain(negs))
    };

    let mut cells: Vec<usize> = if is_upset {
        up.iter()
            .copied()
            .filter(|&m| !up.iter().any(|&n| n != m && n & m == n))
            .collect()
    } else {
        up.clone()
    };
    // fewer conditions first, then x before y before Δ
    cells.sort_by_key(|&m| (m.count_ones(), m.trailing_zeros(), m));
    let formula = Formula::any(cells.into_iter().map(|m| conj(m, !is_upset)));
    PolyConstructibleSet::new(trace_vars(), formula)
}

/// `{t : length_from_traces(t) = k}`.
pub fn exact_length_locus(k: usize) -> PolyConstructibleSet {
    stratify(k)
        .difference(&stratify(k + 1))
        .expect("same variable context")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::local_system::{pushforward_length, Pushforward};

    fn s(text: &str) -> Scalar {
        text.parse().unwrap()
    }

    fn m(rows: [[i64; 2]; 2]) -> Mat2 {
        Mat2::from_ints(rows)
    }

    #[test]
    fn trace_coord_examples() {
        let id = Representation::sl2(vec![Mat2::identity(), Mat2::identity()]).unwrap();
        assert_eq!(trace_coords(&id).unwrap(), TracePoint::from_ints(2, 2, 2));
        let rep = Representation::sl2(vec![m([[2, 1], [1, 1]]), m([[1, 1], [1, 2]])]).unwrap();
        assert_eq!(trace_coords(&rep).unwrap(), TracePoint::from_ints(3, 3, 6));
        let j = m([[0, -1], [1, 0]]);
        let rep = Representation::sl2(vec![j.clone(), j]).unwrap();
        assert_eq!(trace_coords(&rep).unwrap(), TracePoint::from_ints(0, 0, -2));

        let one = Representation::sl2(vec![Mat2::identity()]).unwrap();
        assert_eq!(trace_coords(&one), Err(TraceError::Shape));
        let gl = Representation::gl2(vec![Mat2::identity(), Mat2::identity()]).unwrap();
        assert_eq!(trace_coords(&gl), Err(TraceError::Shape));
    }

    #[test]
    fn discriminant_examples() {
        assert_eq!(discriminant(&TracePoint::from_ints(2, 2, 2)).unwrap(), Scalar::zero());
        assert_eq!(discriminant(&TracePoint::from_ints(0, 0, 0)).unwrap(), Scalar::from_int(-4));
        assert_eq!(discriminant(&TracePoint::from_ints(2, 3, 3)).unwrap(), Scalar::zero());
        let mixed = TracePoint::new(s("sqrt(2)"), s("sqrt(3)"), Scalar::zero());
        assert!(discriminant(&mixed).is_err());
        // 2 + 3 - 4 = 1
        assert!(!is_reducible_point(&mixed));
    }

    #[test]
    fn reducible_locus_on_x_equals_two_is_the_plane_y_equals_z() {
        let on_x = discriminant_poly().substitute(0, &Poly::from_int(3, 2));
        let y_minus_z = Poly::var(3, 1).sub(&Poly::var(3, 2));
        assert_eq!(on_x, y_minus_z.mul(&y_minus_z));
        let on_y = discriminant_poly().substitute(1, &Poly::from_int(3, 2));
        let x_minus_z = Poly::var(3, 0).sub(&Poly::var(3, 2));
        assert_eq!(on_y, x_minus_z.mul(&x_minus_z));
    }

    #[test]
    fn rep_from_traces_examples() {
        let rep = rep_from_traces(&TracePoint::from_ints(2, 2, 2)).unwrap();
        assert_eq!(rep.matrices().unwrap(), &[Mat2::identity(), Mat2::identity()]);

        let t = TracePoint::from_ints(3, 3, 6);
        let rep = rep_from_traces(&t).unwrap();
        assert_eq!(trace_coords(&rep).unwrap(), t);
        assert_eq!(crate::local_system::local_system_length(&rep).unwrap(), 1);

        let rep = rep_from_traces(&TracePoint::from_ints(2, 3, 3)).unwrap();
        let [a, b] = rep.matrices().unwrap() else { panic!() };
        assert_eq!(a, &Mat2::identity());
        assert_eq!(b, &Mat2::diag(s("3/2+1/2*sqrt(5)"), s("3/2-1/2*sqrt(5)")).unwrap());
    }

    #[test]
    fn rep_from_traces_round_trips_on_a_grid() {
        for x in -2..=4 {
            for y in -2..=4 {
                for z in -2..=4 {
                    let t = TracePoint::from_ints(x, y, z);
                    let rep = rep_from_traces(&t).unwrap();
                    assert_eq!(trace_coords(&rep).unwrap(), t);
                    let len = pushforward_length(&rep, Pushforward::Star).unwrap();
                    assert_eq!(len, length_from_traces(&t), "{t}");
                }
            }
        }
    }

    #[test]
    fn rep_from_traces_quadratic_coordinates() {
        let t = TracePoint::new(s("sqrt(5)"), s("1+sqrt(5)"), Scalar::from_int(2));
        let rep = rep_from_traces(&t).unwrap();
        assert_eq!(trace_coords(&rep).unwrap(), t);
        // x^2 - 4 = -2 + ... needs sqrt(2 + 2 sqrt 2) style towers: rejected
        let t = TracePoint::new(s("sqrt(2)"), s("sqrt(2)"), s("1+sqrt(2)"));
        match rep_from_traces(&t) {
            Ok(rep) => assert_eq!(trace_coords(&rep).unwrap(), t),
            Err(e) => assert!(matches!(e, TraceError::Unrepresentable(_))),
        }
        let mixed = TracePoint::new(s("sqrt(2)"), s("sqrt(3)"), Scalar::zero());
        assert!(matches!(rep_from_traces(&mixed), Err(TraceError::Unrepresentable(_))));
    }

    #[test]
    fn length_examples() {
        assert_eq!(length_from_traces(&TracePoint::from_ints(2, 2, 2)), 6);
        assert_eq!(length_from_traces(&TracePoint::from_ints(0, 0, 0)), 1);
        assert_eq!(length_from_traces(&TracePoint::from_ints(2, 3, 3)), 4);
        assert_eq!(length_from_traces(&TracePoint::from_ints(2, 2, 3)), 3);
        assert_eq!(length_from_traces(&TracePoint::from_ints(2, 0, 1)), 2);
    }

    #[test]
    fn stratify_shapes() {
        assert_eq!(stratify(7).notation(), "∅");
        assert_eq!(stratify(6).notation(), "{(2,2,2)}");
        assert_eq!(stratify(5), stratify(6));
        assert_eq!(stratify(4).notation(), "{x=2, y=z} ∪ {y=2, x=z}");
        assert_eq!(stratify(3).notation(), "{x=2, y=2} ∪ {x=2, y=z} ∪ {y=2, x=z}");
        assert_eq!(stratify(2).notation(), "{x=2} ∪ {y=2} ∪ {x^2 - x*y*z + y^2 + z^2 - 4=0}");
        assert_eq!(stratify(1).notation(), "C^3");
        assert_eq!(stratify(0), stratify(1));
    }

    #[test]
    fn stratify_membership_examples() {
        let pt = |x, y, z| TracePoint::from_ints(x, y, z).coords();
        assert!(stratify(6).member(&pt(2, 2, 2)).unwrap());
        assert!(!stratify(2).member(&pt(0, 0, 0)).unwrap());
        assert!(stratify(4).member(&pt(2, 3, 3)).unwrap());
        assert!(!stratify(5).member(&pt(2, 3, 3)).unwrap());
        assert!(exact_length_locus(3).member(&pt(2, 2, 3)).unwrap());
        assert!(!exact_length_locus(3).member(&pt(2, 2, 2)).unwrap());
    }
}
