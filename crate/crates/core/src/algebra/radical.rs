use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// A finite sum `sum_m c_m * sqrt(m)` over square-free integers `m`, with
/// `sqrt(m) = i*sqrt(|m|)` for negative `m` and key `1` for the rational part.
///
/// The square roots of distinct square-free integers are linearly independent
/// over `Q`, so the coefficient map is a canonical form and `is_zero` is exact.
/// This is the arithmetic used when points have coordinates in several
/// different quadratic fields at once.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct RadicalSum {
    terms: BTreeMap<BigInt, BigRational>,
}

impl RadicalSum {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn rational(q: BigRational) -> Self {
        Self::monomial(BigInt::one(), q)
    }

    pub fn from_int(n: i64) -> Self {
        Self::rational(BigRational::from_integer(n.into()))
    }

    /// `coeff * sqrt(radicand)`; `radicand` must already be square-free.
    pub fn monomial(radicand: BigInt, coeff: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(radicand, coeff);
        }
        RadicalSum { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = Self::from_int(1);
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    fn insert(&mut self, key: BigInt, coeff: BigRational) {
        let entry = self.terms.entry(key).or_insert_with(BigRational::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.retain(|_, c| !c.is_zero());
        }
    }
}

/// `sqrt(m) * sqrt(n) = factor * sqrt(key)`.
fn radical_product(m: &BigInt, n: &BigInt) -> (BigInt, BigInt) {
    let g = m.abs().gcd(&n.abs());
    let free = (m.abs() / &g) * (n.abs() / &g);
    match (m.is_negative(), n.is_negative()) {
        (false, false) => (g, free),
        (true, true) => (-g, free),
        _ => (g, -free),
    }
}

impl Add for &RadicalSum {
    type Output = RadicalSum;
    fn add(self, rhs: &RadicalSum) -> RadicalSum {
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.insert(k.clone(), c.clone());
        }
        out
    }
}

impl Add for RadicalSum {
    type Output = RadicalSum;
    fn add(self, rhs: RadicalSum) -> RadicalSum {
        &self + &rhs
    }
}

impl Neg for &RadicalSum {
    type Output = RadicalSum;
    fn neg(self) -> RadicalSum {
        RadicalSum {
            terms: self.terms.iter().map(|(k, c)| (k.clone(), -c)).collect(),
        }
    }
}

impl Sub for &RadicalSum {
    type Output = RadicalSum;
    fn sub(self, rhs: &RadicalSum) -> RadicalSum {
        self + &(-rhs)
    }
}

impl Sub for RadicalSum {
    type Output = RadicalSum;
    fn sub(self, rhs: RadicalSum) -> RadicalSum {
        &self - &rhs
    }
}

impl Mul for &RadicalSum {
    type Output = RadicalSum;
    fn mul(self, rhs: &RadicalSum) -> RadicalSum {
        let mut out = RadicalSum::zero();
        for (m, a) in &self.terms {
            for (n, b) in &rhs.terms {
                let (factor, key) = radical_product(m, n);
                out.insert(key, a * b * BigRational::from_integer(factor));
            }
        }
        out
    }
}

impl Mul for RadicalSum {
    type Output = RadicalSum;
    fn mul(self, rhs: RadicalSum) -> RadicalSum {
        &self * &rhs
    }
}
