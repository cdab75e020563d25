use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::radical::RadicalSum;
use super::AlgebraError;

/// An element `a + b*sqrt(d)` of `Q` or of a quadratic field `Q(sqrt(d))`.
///
/// The discriminant is kept square-free, and `d = 0` exactly when `b = 0`,
/// so two scalars are equal if and only if their fields are.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Scalar {
    rational: BigRational,
    radical: BigRational,
    disc: BigInt,
}

impl Scalar {
    pub fn zero() -> Self {
        Self::from_rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Self::from_rational(BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(n.into()))
    }

    /// `num/den`. Panics when `den == 0`.
    pub fn ratio(num: i64, den: i64) -> Self {
        Self::from_rational(BigRational::new(num.into(), den.into()))
    }

    pub fn from_rational(q: BigRational) -> Self {
        Scalar {
            rational: q,
            radical: BigRational::zero(),
            disc: BigInt::zero(),
        }
    }

    /// Builds `a + b*sqrt(d)`, pulling square factors out of `d`.
    pub fn new(a: BigRational, b: BigRational, d: BigInt) -> Self {
        if b.is_zero() || d.is_zero() {
            return Self::from_rational(a);
        }
        let (root, free) = squarefree_decompose(&d);
        let b = b * BigRational::from_integer(root);
        if free.is_one() {
            return Self::from_rational(a + b);
        }
        Scalar {
            rational: a,
            radical: b,
            disc: free,
        }
    }

    /// Square root of a rational number, in `Q` or in `Q(sqrt(f))` for the
    /// square-free part `f` of the numerator times the denominator.
    pub fn sqrt_rational(q: &BigRational) -> Self {
        if q.is_zero() {
            return Self::zero();
        }
        let den = q.denom().clone();
        let prod = q.numer() * &den;
        Self::new(
            BigRational::zero(),
            BigRational::new(BigInt::one(), den),
            prod,
        )
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.rational
    }

    pub fn radical_part(&self) -> &BigRational {
        &self.radical
    }

    /// Square-free discriminant of the field, 0 for rationals.
    pub fn disc(&self) -> &BigInt {
        &self.disc
    }

    pub fn is_rational(&self) -> bool {
        self.disc.is_zero()
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        self.is_rational().then_some(&self.rational)
    }

    pub fn is_zero(&self) -> bool {
        self.rational.is_zero() && self.radical.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.rational.is_one() && self.radical.is_zero()
    }

    /// Whether `self` equals the integer `n`.
    pub fn is_int(&self, n: i64) -> bool {
        self.is_rational() && self.rational == BigRational::from_integer(n.into())
    }

    /// Galois conjugate `a - b*sqrt(d)`.
    pub fn conj(&self) -> Self {
        Scalar {
            rational: self.rational.clone(),
            radical: -self.radical.clone(),
            disc: self.disc.clone(),
        }
    }

    /// Field norm `a^2 - d*b^2`.
    pub fn norm(&self) -> BigRational {
        &self.rational * &self.rational
            - BigRational::from_integer(self.disc.clone()) * &self.radical * &self.radical
    }

    pub fn to_radical(&self) -> RadicalSum {
        let mut out = RadicalSum::rational(self.rational.clone());
        if !self.radical.is_zero() {
            out = out + RadicalSum::monomial(self.disc.clone(), self.radical.clone());
        }
        out
    }

    /// The field shared by all of `items`, as a discriminant.
    pub fn common_disc<'a>(items: impl IntoIterator<Item = &'a Scalar>) -> Result<BigInt, AlgebraError> {
        let mut disc = BigInt::zero();
        for s in items {
            disc = join_disc(&disc, &s.disc)?;
        }
        Ok(disc)
    }

    pub fn checked_add(&self, rhs: &Scalar) -> Result<Scalar, AlgebraError> {
        let disc = join_disc(&self.disc, &rhs.disc)?;
        Ok(Self::assemble(
            &self.rational + &rhs.rational,
            &self.radical + &rhs.radical,
            disc,
        ))
    }

    pub fn checked_sub(&self, rhs: &Scalar) -> Result<Scalar, AlgebraError> {
        self.checked_add(&-rhs)
    }

    pub fn checked_mul(&self, rhs: &Scalar) -> Result<Scalar, AlgebraError> {
        let disc = join_disc(&self.disc, &rhs.disc)?;
        let d = BigRational::from_integer(disc.clone());
        let a = &self.rational * &rhs.rational + d * &self.radical * &rhs.radical;
        let b = &self.rational * &rhs.radical + &self.radical * &rhs.rational;
        Ok(Self::assemble(a, b, disc))
    }

    pub fn checked_inv(&self) -> Result<Scalar, AlgebraError> {
        if self.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        let n = self.norm();
        Ok(Self::assemble(
            &self.rational / &n,
            -(&self.radical / &n),
            self.disc.clone(),
        ))
    }

    pub fn checked_div(&self, rhs: &Scalar) -> Result<Scalar, AlgebraError> {
        join_disc(&self.disc, &rhs.disc)?;
        self.checked_mul(&rhs.checked_inv()?)
    }

    pub fn inv(&self) -> Scalar {
        self.checked_inv().expect("inverse of zero scalar")
    }

    pub fn square(&self) -> Scalar {
        self * self
    }

    /// A square root of `self`. Rationals may move into a new quadratic
    /// field; an irrational element must have its root inside its own field,
    /// since the tower is capped at one quadratic extension.
    pub fn sqrt(&self) -> Result<Scalar, AlgebraError> {
        if self.is_rational() {
            return Ok(Self::sqrt_rational(&self.rational));
        }
        // (x + y*sqrt(d))^2 = self  <=>  x^2 = (a +- sqrt(N))/2, y = b/(2x)
        let norm_root = rational_sqrt(&self.norm()).ok_or_else(|| self.tower_error())?;
        let two = BigRational::from_integer(2.into());
        for n in [norm_root.clone(), -norm_root] {
            let x2 = (&self.rational + n) / &two;
            if x2.is_zero() {
                continue;
            }
            if let Some(x) = rational_sqrt(&x2) {
                let y = &self.radical / (&two * &x);
                return Ok(Self::assemble(x, y, self.disc.clone()));
            }
        }
        Err(self.tower_error())
    }

    fn tower_error(&self) -> AlgebraError {
        AlgebraError::FieldTower(format!("square root of {self} is not in Q(sqrt({}))", self.disc))
    }

    fn assemble(a: BigRational, b: BigRational, disc: BigInt) -> Scalar {
        if b.is_zero() {
            Self::from_rational(a)
        } else {
            Scalar {
                rational: a,
                radical: b,
                disc,
            }
        }
    }
}

/// The field generated by two discriminants, if it is still at most quadratic.
pub(crate) fn join_disc(a: &BigInt, b: &BigInt) -> Result<BigInt, AlgebraError> {
    if a.is_zero() || a == b {
        Ok(b.clone())
    } else if b.is_zero() {
        Ok(a.clone())
    } else {
        Err(AlgebraError::FieldMismatch {
            left: a.clone(),
            right: b.clone(),
        })
    }
}

/// Exact rational square root, if there is one.
pub fn rational_sqrt(q: &BigRational) -> Option<BigRational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    (&n * &n == *q.numer() && &d * &d == *q.denom()).then(|| BigRational::new(n, d))
}

/// Writes `n = s^2 * f` with `f` square-free and carrying the sign of `n`.
/// Returns `(s, f)`; `n = 0` gives `(0, 0)`.
pub fn squarefree_decompose(n: &BigInt) -> (BigInt, BigInt) {
    if n.is_zero() {
        return (BigInt::zero(), BigInt::zero());
    }
    let sign = if n.sign() == Sign::Minus { -1 } else { 1 };
    let mut rest = n.abs();
    let mut root = BigInt::one();
    let mut free = BigInt::from(sign);

    if let Some(mut small) = rest.to_u64() {
        let (mut r, mut f) = (1u64, 1u64);
        let mut p = 2u64;
        while p.saturating_mul(p) <= small {
            let mut e = 0;
            while small % p == 0 {
                small /= p;
                e += 1;
            }
            r *= p.pow(e / 2);
            if e % 2 == 1 {
                f *= p;
            }
            p += if p == 2 { 1 } else { 2 };
        }
        f *= small;
        return (BigInt::from(r), BigInt::from(f) * sign);
    }

    let mut p = BigInt::from(2);
    while &p * &p <= rest {
        let mut e = 0u32;
        loop {
            let (q, r) = rest.div_rem(&p);
            if !r.is_zero() {
                break;
            }
            rest = q;
            e += 1;
        }
        root *= p.pow(e / 2);
        if e % 2 == 1 {
            free *= &p;
        }
        p += 1;
    }
    // whatever is left is 1 or a prime
    if rest.is_one() {
        (root, free)
    } else {
        let s = rest.sqrt();
        if &s * &s == rest {
            (root * s, free)
        } else {
            (root, free * rest)
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.rational)?;
        if !self.radical.is_zero() {
            let sign = if self.radical.is_negative() { '-' } else { '+' };
            write!(f, "{sign}{}*sqrt({})", self.radical.abs(), self.disc)?;
        }
        Ok(())
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for Scalar {
    type Err = AlgebraError;

    /// Accepts `p`, `p/q`, `p/q+r/s*sqrt(d)`, `p/q-sqrt(d)` and `r/s*sqrt(d)`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || AlgebraError::Parse(s.to_string());
        let text: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if text.is_empty() {
            return Err(bad());
        }
        let Some(idx) = text.find("sqrt(") else {
            return parse_rational(&text).map(Self::from_rational).ok_or_else(bad);
        };
        let inner = text[idx + 5..].strip_suffix(')').ok_or_else(bad)?;
        let d: BigInt = inner.parse().map_err(|_| bad())?;
        let head = &text[..idx];
        let (head, explicit) = match head.strip_suffix('*') {
            Some(h) => (h, true),
            None => (head, false),
        };
        let split = head
            .char_indices()
            .rev()
            .find(|&(i, c)| i > 0 && (c == '+' || c == '-'))
            .map(|(i, _)| i);
        let (rat, coeff) = match split {
            Some(i) => (&head[..i], &head[i..]),
            None => ("", head),
        };
        let a = if rat.is_empty() {
            BigRational::zero()
        } else {
            parse_rational(rat).ok_or_else(bad)?
        };
        let b = match coeff {
            "" | "+" if !explicit => BigRational::one(),
            "-" if !explicit => -BigRational::one(),
            c if explicit => parse_rational(c.strip_prefix('+').unwrap_or(c)).ok_or_else(bad)?,
            _ => return Err(bad()),
        };
        Ok(Self::new(a, b, d))
    }
}

fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.strip_prefix('+').unwrap_or(s);
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.parse().ok()?;
            let d: BigInt = d.parse().ok()?;
            (!d.is_zero()).then(|| BigRational::new(n, d))
        }
        None => s.parse::<BigInt>().ok().map(BigRational::from_integer),
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl From<BigRational> for Scalar {
    fn from(q: BigRational) -> Self {
        Scalar::from_rational(q)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            rational: -self.rational.clone(),
            radical: -self.radical.clone(),
            disc: self.disc.clone(),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

// The operator impls panic on mixed fields; use the `checked_*` methods when
// the operands are not known to share a field.
macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                match self.$checked(rhs) {
                    Ok(v) => v,
                    Err(e) => panic!("{e}"),
                }
            }
        }
        impl $trait<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
        impl $trait<Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);
forward_binop!(Div, div, checked_div);
