use std::fmt;

use num_bigint::BigInt;

use super::scalar::join_disc;
use super::{AlgebraError, Scalar};

/// A column vector of length two.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Vec2(pub [Scalar; 2]);

impl Vec2 {
    pub fn new(a: Scalar, b: Scalar) -> Self {
        Vec2([a, b])
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Scalar::is_zero)
    }

    /// `det[self | other] == 0`.
    pub fn is_parallel(&self, other: &Vec2) -> bool {
        let [a, b] = &self.0;
        let [c, d] = &other.0;
        (a * d - b * c).is_zero()
    }

    /// Index of the first nonzero coordinate.
    pub fn pivot(&self) -> Option<usize> {
        self.0.iter().position(|s| !s.is_zero())
    }

    /// Rescales so the first nonzero coordinate is 1.
    pub fn normalized(&self) -> Vec2 {
        match self.pivot() {
            Some(i) => {
                let inv = self.0[i].inv();
                Vec2([&self.0[0] * &inv, &self.0[1] * &inv])
            }
            None => self.clone(),
        }
    }
}

/// A 2x2 matrix whose entries share one field.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat2 {
    entries: [[Scalar; 2]; 2],
    disc: BigInt,
}

impl Mat2 {
    /// `[[a, b], [c, d]]`, rejecting entries from two different quadratic fields.
    pub fn new(a: Scalar, b: Scalar, c: Scalar, d: Scalar) -> Result<Self, AlgebraError> {
        let disc = Scalar::common_disc([&a, &b, &c, &d])?;
        Ok(Mat2 {
            entries: [[a, b], [c, d]],
            disc,
        })
    }

    pub fn from_ints(rows: [[i64; 2]; 2]) -> Self {
        let [[a, b], [c, d]] = rows;
        Self::new(a.into(), b.into(), c.into(), d.into()).expect("integer entries")
    }

    pub fn identity() -> Self {
        Self::from_ints([[1, 0], [0, 1]])
    }

    pub fn diag(a: Scalar, d: Scalar) -> Result<Self, AlgebraError> {
        Self::new(a, Scalar::zero(), Scalar::zero(), d)
    }

    pub fn entry(&self, row: usize, col: usize) -> &Scalar {
        &self.entries[row][col]
    }

    pub fn rows(&self) -> &[[Scalar; 2]; 2] {
        &self.entries
    }

    /// Discriminant of the entries' field (0 for rational matrices).
    pub fn disc(&self) -> &BigInt {
        &self.disc
    }

    pub fn is_rational(&self) -> bool {
        self.entries.iter().flatten().all(Scalar::is_rational)
    }

    pub fn trace(&self) -> Scalar {
        &self.entries[0][0] + &self.entries[1][1]
    }

    pub fn det(&self) -> Scalar {
        let [[a, b], [c, d]] = &self.entries;
        a * d - b * c
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(Scalar::is_zero)
    }

    /// Whether the matrix is `c * I`.
    pub fn is_scalar_matrix(&self) -> bool {
        let [[a, b], [c, d]] = &self.entries;
        b.is_zero() && c.is_zero() && a == d
    }

    pub fn mul(&self, rhs: &Mat2) -> Result<Mat2, AlgebraError> {
        let x = &self.entries;
        let y = &rhs.entries;
        let e = |i: usize, j: usize| -> Result<Scalar, AlgebraError> {
            x[i][0].checked_mul(&y[0][j])?.checked_add(&x[i][1].checked_mul(&y[1][j])?)
        };
        Mat2::new(e(0, 0)?, e(0, 1)?, e(1, 0)?, e(1, 1)?)
    }

    pub fn sub(&self, rhs: &Mat2) -> Result<Mat2, AlgebraError> {
        let x = &self.entries;
        let y = &rhs.entries;
        Mat2::new(
            x[0][0].checked_sub(&y[0][0])?,
            x[0][1].checked_sub(&y[0][1])?,
            x[1][0].checked_sub(&y[1][0])?,
            x[1][1].checked_sub(&y[1][1])?,
        )
    }

    /// `self - c*I`.
    pub fn shift(&self, c: &Scalar) -> Result<Mat2, AlgebraError> {
        let [[a, b], [cc, d]] = &self.entries;
        Mat2::new(a.checked_sub(c)?, b.clone(), cc.clone(), d.checked_sub(c)?)
    }

    pub fn apply(&self, v: &Vec2) -> Result<Vec2, AlgebraError> {
        let [[a, b], [c, d]] = &self.entries;
        let [x, y] = &v.0;
        Ok(Vec2([
            a.checked_mul(x)?.checked_add(&b.checked_mul(y)?)?,
            c.checked_mul(x)?.checked_add(&d.checked_mul(y)?)?,
        ]))
    }

    pub fn inverse(&self) -> Result<Mat2, AlgebraError> {
        let det_inv = self.det().checked_inv()?;
        let [[a, b], [c, d]] = &self.entries;
        Mat2::new(d * &det_inv, -(b * &det_inv), -(c * &det_inv), a * &det_inv)
    }

    pub fn transpose(&self) -> Mat2 {
        let [[a, b], [c, d]] = &self.entries;
        Mat2 {
            entries: [[a.clone(), c.clone()], [b.clone(), d.clone()]],
            disc: self.disc.clone(),
        }
    }

    pub fn commutes_with(&self, other: &Mat2) -> Result<bool, AlgebraError> {
        Ok(self.mul(other)? == other.mul(self)?)
    }

    /// Whether `self` maps the line spanned by `v` into itself.
    pub fn preserves_line(&self, v: &Vec2) -> Result<bool, AlgebraError> {
        let w = self.apply(v)?;
        let [a, b] = &v.0;
        let [c, d] = &w.0;
        Ok(a.checked_mul(d)?.checked_sub(&b.checked_mul(c)?)?.is_zero())
    }

    /// Roots of the characteristic polynomial, possibly in one new quadratic
    /// field when the entries are rational.
    pub fn eigenvalues(&self) -> Result<(Scalar, Scalar), AlgebraError> {
        let t = self.trace();
        let disc = t.square() - Scalar::from_int(4) * self.det();
        let root = disc.sqrt()?;
        if join_disc(&self.disc, root.disc()).is_err() {
            return Err(AlgebraError::FieldTower(format!(
                "eigenvalues of {self:?} need sqrt({}) over Q(sqrt({}))",
                root.disc(),
                self.disc
            )));
        }
        let two = Scalar::from_int(2);
        Ok((
            t.checked_add(&root)?.checked_div(&two)?,
            t.checked_sub(&root)?.checked_div(&two)?,
        ))
    }

    /// The eigenlines of a matrix that is not a multiple of the identity,
    /// one per distinct eigenvalue, each normalized.
    pub fn eigenlines(&self) -> Result<Vec<Vec2>, AlgebraError> {
        debug_assert!(!self.is_scalar_matrix());
        let (l1, l2) = self.eigenvalues()?;
        let mut lambdas = vec![l1];
        if l2 != lambdas[0] {
            lambdas.push(l2);
        }
        lambdas
            .iter()
            .map(|l| Ok(kernel_vector(&self.shift(l)?).normalized()))
            .collect()
    }
}

/// A nonzero kernel vector of a singular, nonzero 2x2 matrix.
fn kernel_vector(m: &Mat2) -> Vec2 {
    let [[p, q], [r, s]] = m.rows();
    if !p.is_zero() || !q.is_zero() {
        Vec2([q.clone(), -p])
    } else {
        Vec2([-s, r.clone()])
    }
}

impl fmt::Debug for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [[a, b], [c, d]] = &self.entries;
        write!(f, "[[{a}, {b}], [{c}, {d}]]")
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Eigenvalues `(λ, 1/λ)` of a rational matrix of determinant 1, from
/// `λ^2 - tr(m) λ + 1 = 0`. Both roots lie in `Q(sqrt(tr^2 - 4))`.
pub fn char_roots(m: &Mat2) -> Result<(Scalar, Scalar), AlgebraError> {
    if !m.is_rational() {
        return Err(AlgebraError::Precondition("char_roots needs rational entries".into()));
    }
    if !m.det().is_one() {
        return Err(AlgebraError::Precondition("char_roots needs determinant 1".into()));
    }
    m.eigenvalues()
}

/// `dim ker(m - I)`: the number of Jordan blocks of `m` with eigenvalue 1.
pub fn eig1_multiplicity(m: &Mat2) -> usize {
    let n = m.shift(&Scalar::one()).expect("shift by a rational stays in the field");
    if n.is_zero() {
        2
    } else if n.det().is_zero() {
        1
    } else {
        0
    }
}

/// A common eigenvector of `a` and `b`, searched over the splitting field of
/// the first non-scalar matrix of the pair.
pub fn common_eigenvector(a: &Mat2, b: &Mat2) -> Result<Option<Vec2>, AlgebraError> {
    common_eigenline(&[a.clone(), b.clone()])
}

/// A nonzero vector spanning a line invariant under every matrix in `ms`.
///
/// Every invariant line is an eigenline of the first non-scalar matrix, so it
/// suffices to test those. When that matrix has entries in `Q(sqrt(d))` and
/// eigenvalues outside it, a shared line exists exactly when all matrices
/// commute with it, and then it is not representable: that case is reported
/// as `FieldTower`.
pub fn common_eigenline(ms: &[Mat2]) -> Result<Option<Vec2>, AlgebraError> {
    let Some(pivot) = ms.iter().find(|m| !m.is_scalar_matrix()) else {
        return Ok(Some(Vec2([Scalar::one(), Scalar::zero()])));
    };
    match pivot.eigenlines() {
        Ok(lines) => {
            for v in lines {
                let mut shared = true;
                for m in ms {
                    if !m.preserves_line(&v)? {
                        shared = false;
                        break;
                    }
                }
                if shared {
                    return Ok(Some(v));
                }
            }
            Ok(None)
        }
        Err(AlgebraError::FieldTower(msg)) => {
            for m in ms {
                if !m.commutes_with(pivot)? {
                    return Ok(None);
                }
            }
            Err(AlgebraError::FieldTower(format!(
                "common eigenline exists but needs a second extension: {msg}"
            )))
        }
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(text: &str) -> Scalar {
        text.parse().unwrap()
    }

    #[test]
    fn char_roots_examples() {
        let (a, b) = char_roots(&Mat2::from_ints([[1, 1], [0, 1]])).unwrap();
        assert_eq!((a, b), (Scalar::one(), Scalar::one()));

        // tr = 3: roots (3 +- sqrt 5)/2, sum 3 and product 1
        let (a, b) = char_roots(&Mat2::from_ints([[2, 1], [1, 1]])).unwrap();
        assert_eq!(a, s("3/2+1/2*sqrt(5)"));
        assert_eq!(b, s("3/2-1/2*sqrt(5)"));
        assert_eq!(&a * &b, Scalar::one());
        assert_eq!(&a + &b, Scalar::from_int(3));

        let (a, b) = char_roots(&Mat2::from_ints([[0, -1], [1, 0]])).unwrap();
        assert_eq!(a, s("sqrt(-1)"));
        assert_eq!(b, s("-sqrt(-1)"));
    }

    #[test]
    fn char_roots_rejects_bad_input() {
        assert!(char_roots(&Mat2::from_ints([[2, 0], [0, 1]])).is_err());
        let m = Mat2::new(s("sqrt(2)"), Scalar::zero(), Scalar::zero(), s("1/2*sqrt(2)")).unwrap();
        assert!(char_roots(&m).is_err());
    }

    #[test]
    fn eig1_examples() {
        assert_eq!(eig1_multiplicity(&Mat2::identity()), 2);
        assert_eq!(eig1_multiplicity(&Mat2::from_ints([[1, 1], [0, 1]])), 1);
        let m = Mat2::diag(Scalar::from_int(2), Scalar::ratio(1, 2)).unwrap();
        assert_eq!(eig1_multiplicity(&m), 0);
        // quadratic entries: diag(1, phi)
        let m = Mat2::diag(Scalar::one(), s("1/2+1/2*sqrt(5)")).unwrap();
        assert_eq!(eig1_multiplicity(&m), 1);
    }

    #[test]
    fn common_eigenvector_examples() {
        let e1 = Vec2::new(Scalar::one(), Scalar::zero());
        let id = Mat2::identity();
        assert_eq!(common_eigenvector(&id, &id).unwrap(), Some(e1.clone()));

        let u = Mat2::from_ints([[1, 1], [0, 1]]);
        assert_eq!(common_eigenvector(&u, &id).unwrap(), Some(e1));

        let a = Mat2::from_ints([[0, -1], [1, 0]]);
        let b = Mat2::from_ints([[1, 1], [1, 2]]);
        assert_eq!(common_eigenvector(&a, &b).unwrap(), None);
    }

    #[test]
    fn common_eigenvector_over_splitting_field() {
        // b = a^2 shares both irrational eigenlines of a
        let a = Mat2::from_ints([[2, 1], [1, 1]]);
        let b = a.mul(&a).unwrap();
        let v = common_eigenvector(&a, &b).unwrap().unwrap();
        assert_eq!(v.0[1].disc(), &BigInt::from(5));
        assert!(a.preserves_line(&v).unwrap() && b.preserves_line(&v).unwrap());
    }

    #[test]
    fn commuting_quadratic_pair_beyond_the_tower() {
        // a has entries in Q(sqrt 2) and eigenvalues in Q(sqrt 2, sqrt 3)
        let a = Mat2::new(s("sqrt(2)"), Scalar::one(), Scalar::one(), Scalar::zero()).unwrap();
        let b = a.mul(&a).unwrap();
        assert!(matches!(common_eigenvector(&a, &b), Err(AlgebraError::FieldTower(_))));
        let c = Mat2::from_ints([[1, 1], [0, 1]]);
        assert_eq!(common_eigenvector(&a, &c).unwrap(), None);
    }
}
