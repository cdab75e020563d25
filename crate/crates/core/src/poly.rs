//! Sparse multivariate polynomials over `Q` in lexicographic monomial order.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::algebra::{rational_sqrt, RadicalSum};
use crate::formula::FormulaError;

/// Exponent vector; `Vec`'s ordering is lexicographic with the first
/// variable most significant.
pub type Monomial = Vec<u32>;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Monomial, BigRational>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: BigRational) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn from_int(nvars: usize, c: i64) -> Self {
        Self::constant(nvars, BigRational::from_integer(c.into()))
    }

    pub fn var(nvars: usize, index: usize) -> Self {
        let mut mono = vec![0; nvars];
        mono[index] = 1;
        Self::from_terms(nvars, [(mono, BigRational::one())])
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Monomial, BigRational)>) -> Self {
        let mut p = Self::zero(nvars);
        for (m, c) in terms {
            assert_eq!(m.len(), nvars, "monomial arity");
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, mono: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&mono) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&mono);
                }
            }
            None => {
                self.terms.insert(mono, c);
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.iter().all(|&e| e == 0))
    }

    pub fn constant_term(&self) -> BigRational {
        self.terms
            .get(&vec![0; self.nvars])
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.iter().sum()).max().unwrap_or(0)
    }

    /// Largest term in lex order.
    pub fn leading_term(&self) -> Option<(&Monomial, &BigRational)> {
        self.terms.iter().next_back()
    }

    /// Indices of the variables that occur.
    pub fn support(&self) -> Vec<usize> {
        (0..self.nvars)
            .filter(|&i| self.terms.keys().any(|m| m[i] > 0))
            .collect()
    }

    pub fn scale(&self, c: &BigRational) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Poly {
        self.scale(&-BigRational::one())
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        assert_eq!(self.nvars, other.nvars);
        let mut out = Poly::zero(self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let m = m1.iter().zip(m2).map(|(a, b)| a + b).collect();
                out.add_term(m, c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, exp: u32) -> Poly {
        let mut acc = Poly::from_int(self.nvars, 1);
        for _ in 0..exp {
            acc = acc.mul(self);
        }
        acc
    }

    /// Replaces variable `index` by `value`.
    pub fn substitute(&self, index: usize, value: &Poly) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            let mut rest = m.clone();
            let e = std::mem::take(&mut rest[index]);
            let term = Poly::from_terms(self.nvars, [(rest, c.clone())]).mul(&value.pow(e));
            out = out.add(&term);
        }
        out
    }

    /// Exact evaluation at a point whose coordinates may live in different
    /// quadratic fields.
    pub fn eval(&self, point: &[RadicalSum]) -> RadicalSum {
        assert_eq!(point.len(), self.nvars, "point dimension");
        let mut acc = RadicalSum::zero();
        for (m, c) in &self.terms {
            let mut term = RadicalSum::rational(c.clone());
            for (x, &e) in point.iter().zip(m) {
                if e > 0 {
                    term = &term * &x.pow(e);
                }
            }
            acc = &acc + &term;
        }
        acc
    }

    /// `self` scaled to integer coefficients with content 1 and a positive
    /// leading coefficient.
    pub fn primitive(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let lcm = self
            .terms
            .values()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let gcd = self
            .terms
            .values()
            .fold(BigInt::zero(), |acc, c| acc.gcd(&(c.numer() * (&lcm / c.denom()))));
        let mut factor = BigRational::new(lcm, gcd);
        if self.leading_term().unwrap().1.is_negative() {
            factor = -factor;
        }
        self.scale(&factor)
    }

    /// Exact square root in `Q[vars]`, if `self` is a perfect square.
    pub fn sqrt(&self) -> Option<Poly> {
        let Some((lead_mono, lead_coeff)) = self.leading_term() else {
            return Some(self.clone());
        };
        if lead_mono.iter().any(|e| e % 2 == 1) {
            return None;
        }
        let root_mono: Monomial = lead_mono.iter().map(|e| e / 2).collect();
        let root_coeff = rational_sqrt(lead_coeff)?;
        let half_degree = self.total_degree() / 2;
        let two_lead = BigRational::from_integer(2.into()) * &root_coeff;

        let mut root = Poly::from_terms(self.nvars, [(root_mono.clone(), root_coeff)]);
        loop {
            let rem = self.sub(&root.mul(&root));
            let Some((m, c)) = rem.leading_term() else {
                return Some(root);
            };
            // next term t solves lead(rem) = 2 * lead(root) * t
            if m.iter().zip(&root_mono).any(|(a, b)| a < b) {
                return None;
            }
            let t_mono: Monomial = m.iter().zip(&root_mono).map(|(a, b)| a - b).collect();
            if t_mono >= root_mono || t_mono.iter().sum::<u32>() > half_degree {
                return None;
            }
            if root.terms.contains_key(&t_mono) {
                return None;
            }
            root.add_term(t_mono, c / &two_lead);
        }
    }

    pub fn is_linear(&self) -> bool {
        !self.is_zero() && self.total_degree() == 1
    }

    /// Renders with the given variable names, largest term first.
    pub fn display(&self, vars: &[String]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            match (i, neg) {
                (0, true) => out.push('-'),
                (0, false) => {}
                (_, true) => out.push_str(" - "),
                (_, false) => out.push_str(" + "),
            }
            let factors: Vec<String> = m
                .iter()
                .zip(vars)
                .filter(|(&e, _)| e > 0)
                .map(|(&e, v)| if e == 1 { v.clone() } else { format!("{v}^{e}") })
                .collect();
            if factors.is_empty() {
                let _ = write!(out, "{abs}");
            } else if abs.is_one() {
                out.push_str(&factors.join("*"));
            } else {
                let _ = write!(out, "{abs}*{}", factors.join("*"));
            }
        }
        out
    }

    pub fn parse(text: &str, vars: &[String]) -> Result<Poly, FormulaError> {
        let mut p = Parser {
            src: text.as_bytes(),
            pos: 0,
            vars,
            text,
        };
        let out = p.expr()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.error("trailing input"));
        }
        Ok(out)
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    vars: &'a [String],
    text: &'a str,
}

impl Parser<'_> {
    fn error(&self, what: &str) -> FormulaError {
        FormulaError::Parse(format!("{what} at offset {} in {:?}", self.pos, self.text))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Poly, FormulaError> {
        let n = self.vars.len();
        let mut acc = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                self.term()?.neg()
            }
            Some(b'+') => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        while let Some(op @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let t = self.term()?;
            acc = if op == b'+' { acc.add(&t) } else { acc.sub(&t) };
        }
        debug_assert_eq!(acc.nvars, n);
        Ok(acc)
    }

    fn term(&mut self) -> Result<Poly, FormulaError> {
        let mut acc = self.power()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            acc = acc.mul(&self.power()?);
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<Poly, FormulaError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let e = self.integer()?;
            let e: u32 = e.try_into().map_err(|_| self.error("bad exponent"))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<BigInt, FormulaError> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected a number"));
        }
        Ok(self.text[start..self.pos].parse().expect("digits"))
    }

    fn atom(&mut self) -> Result<Poly, FormulaError> {
        let n = self.vars.len();
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let num = self.integer()?;
                // `p/q` is a rational literal; there is no general division
                if self.peek() == Some(b'/') {
                    self.pos += 1;
                    self.skip_ws();
                    let den = self.integer()?;
                    if den.is_zero() {
                        return Err(self.error("zero denominator"));
                    }
                    return Ok(Poly::constant(n, BigRational::new(num, den)));
                }
                Ok(Poly::constant(n, BigRational::from_integer(num)))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = &self.text[start..self.pos];
                match self.vars.iter().position(|v| v == name) {
                    Some(i) => Ok(Poly::var(n, i)),
                    None => Err(FormulaError::UnknownVariable(name.to_string())),
                }
            }
            _ => Err(self.error("unexpected token")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xyz() -> Vec<String> {
        ["x", "y", "z"].map(String::from).to_vec()
    }

    fn p(text: &str) -> Poly {
        Poly::parse(text, &xyz()).unwrap()
    }

    #[test]
    fn parse_print_roundtrip() {
        let d = p("z^2 - x*y*z - 4 + y^2 + x^2");
        assert_eq!(d.display(&xyz()), "x^2 - x*y*z + y^2 + z^2 - 4");
        assert_eq!(p(&d.display(&xyz())), d);
        assert_eq!(p("(x - 2)^2").display(&xyz()), "x^2 - 4*x + 4");
        assert_eq!(p("1/2*x - 3/4").display(&xyz()), "1/2*x - 3/4");
        assert!(Poly::parse("w + 1", &xyz()).is_err());
        assert!(Poly::parse("x +", &xyz()).is_err());
        assert!(Poly::parse("x ) ", &xyz()).is_err());
    }

    #[test]
    fn primitive_form() {
        assert_eq!(p("-1/2*x + 1").primitive(), p("x - 2"));
        assert_eq!(p("6*y - 4*z").primitive(), p("3*y - 2*z"));
        assert_eq!(p("z - y").primitive(), p("y - z"));
    }

    #[test]
    fn square_roots() {
        assert_eq!(p("(y - z)^2").sqrt().unwrap().primitive(), p("y - z"));
        assert_eq!(p("(x*y - 3*z + 1/2)^2").sqrt().unwrap().primitive(), p("2*x*y - 6*z + 1"));
        assert!(p("x^2 + 1").sqrt().is_none());
        assert!(p("x^2 - y^2").sqrt().is_none());
        assert!(p("x*y").sqrt().is_none());
        assert!(p("2*x^2").sqrt().is_none());
    }

    #[test]
    fn substitution() {
        // on x = 2 the discriminant collapses to (z - y)^2
        let d = p("z^2 - x*y*z + x^2 + y^2 - 4");
        let two = Poly::from_int(3, 2);
        assert_eq!(d.substitute(0, &two), p("(z - y)^2"));
        assert_eq!(d.substitute(1, &two), p("(z - x)^2"));
        assert_eq!(d.substitute(0, &two).substitute(1, &two), p("(z - 2)^2"));
    }
}
