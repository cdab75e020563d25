//! Torsion-translated subtori of `(C*)^b` and their Boolean combinations.
//!
//! A point `t` is written additively through its exponent vector `v` with
//! `t_i = exp(2πi v_i)`, so a coset `{t^E = ζ}` becomes `E v ≡ r (mod 1)`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde_json::{json, Value};

use super::lattice::{hermite_normal_form, smith_normal_form, IntMatrix};
use super::TorusError;
use crate::algebra::Scalar;
use crate::formula::Formula;

pub const TORUS_HEADER: &str = "# perv torus v1";

/// Upper bound on the number of components `intersect_cosets` will enumerate.
pub const MAX_COMPONENTS: u64 = 10_000;

/// Reduces a rational into `[0, 1)`.
pub fn frac(q: &BigRational) -> BigRational {
    q - q.floor()
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TorsionCoset {
    ambient_rank: usize,
    equations: Vec<Vec<BigInt>>,
    rhs: Vec<BigRational>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Normalized {
    Empty,
    Coset { canonical: TorsionCoset, dimension: usize },
}

impl TorsionCoset {
    pub fn new(ambient_rank: usize, equations: Vec<Vec<BigInt>>, rhs: Vec<BigRational>) -> Result<Self, TorusError> {
        if ambient_rank == 0 {
            return Err(TorusError::Shape("ambient rank must be positive".into()));
        }
        if equations.len() != rhs.len() {
            return Err(TorusError::Shape(format!(
                "{} equations but {} right-hand sides",
                equations.len(),
                rhs.len()
            )));
        }
        if let Some((i, row)) = equations.iter().enumerate().find(|(_, r)| r.len() != ambient_rank) {
            return Err(TorusError::Shape(format!(
                "equation {i} has {} exponents, expected {ambient_rank}",
                row.len()
            )));
        }
        Ok(TorsionCoset {
            ambient_rank,
            equations,
            rhs: rhs.iter().map(frac).collect(),
        })
    }

    /// Convenience constructor from small integers and `(num, den)` pairs.
    pub fn from_ints(ambient_rank: usize, equations: &[Vec<i64>], rhs: &[(i64, i64)]) -> Result<Self, TorusError> {
        Self::new(
            ambient_rank,
            equations.iter().map(|r| r.iter().map(|&e| BigInt::from(e)).collect()).collect(),
            rhs.iter()
                .map(|&(p, q)| BigRational::new(p.into(), q.into()))
                .collect(),
        )
    }

    /// The whole torus.
    pub fn full(ambient_rank: usize) -> Self {
        TorsionCoset {
            ambient_rank,
            equations: Vec::new(),
            rhs: Vec::new(),
        }
    }

    /// `{t_i = 1}` (0-based index).
    pub fn coordinate_is_one(ambient_rank: usize, i: usize) -> Self {
        let mut row = vec![BigInt::zero(); ambient_rank];
        row[i] = BigInt::one();
        TorsionCoset {
            ambient_rank,
            equations: vec![row],
            rhs: vec![BigRational::zero()],
        }
    }

    /// The single point `p`.
    pub fn point(p: &TorsionPoint) -> Self {
        let b = p.exponents.len();
        let equations = (0..b)
            .map(|i| (0..b).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
            .collect();
        TorsionCoset {
            ambient_rank: b,
            equations,
            rhs: p.exponents.clone(),
        }
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    pub fn equations(&self) -> &[Vec<BigInt>] {
        &self.equations
    }

    pub fn rhs(&self) -> &[BigRational] {
        &self.rhs
    }

    fn matrix(&self) -> IntMatrix {
        IntMatrix::from_rows(self.ambient_rank, &self.equations)
    }

    pub fn contains(&self, p: &TorsionPoint) -> Result<bool, TorusError> {
        check_rank(self.ambient_rank, p.exponents.len())?;
        Ok(self.equations.iter().zip(&self.rhs).all(|(row, r)| {
            let lhs = row
                .iter()
                .zip(&p.exponents)
                .fold(BigRational::zero(), |acc, (e, v)| acc + v * BigRational::from(e.clone()));
            (lhs - r).is_integer()
        }))
    }

    /// Emptiness test and canonical form. The canonical coset is the Hermite
    /// form of the row lattice together with the induced character, which
    /// depends only on the underlying set.
    pub fn normalize(&self) -> Normalized {
        let e = self.matrix();
        let snf = smith_normal_form(&e);
        let ur = apply_rational(&snf.u, &self.rhs);
        let rank = snf.rank();
        if ur[rank..].iter().any(|x| !x.is_integer()) {
            return Normalized::Empty;
        }
        let (w, h) = hermite_normal_form(&e);
        let wr = apply_rational(&w, &self.rhs);
        let mut equations = Vec::new();
        let mut rhs = Vec::new();
        for (i, r) in wr.iter().enumerate() {
            if h.row(i).iter().any(|x| !x.is_zero()) {
                equations.push(h.row(i).to_vec());
                rhs.push(frac(r));
            }
        }
        Normalized::Coset {
            canonical: TorsionCoset {
                ambient_rank: self.ambient_rank,
                equations,
                rhs,
            },
            dimension: self.ambient_rank - rank,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.normalize() == Normalized::Empty
    }

    /// Splits the coset into translates of a connected subtorus, one for each
    /// choice of `d_i`-th roots along the Smith diagonal.
    pub fn components(&self) -> Result<Vec<TorsionCoset>, TorusError> {
        let e = self.matrix();
        let snf = smith_normal_form(&e);
        let ur = apply_rational(&snf.u, &self.rhs);
        let rank = snf.rank();
        if ur[rank..].iter().any(|x| !x.is_integer()) {
            return Ok(Vec::new());
        }
        let diag = snf.diagonal();
        let product = diag[..rank].iter().fold(BigInt::one(), |acc, d| acc * d);
        if product > BigInt::from(MAX_COMPONENTS) {
            return Err(TorusError::DivisorProductTooLarge(product));
        }
        let divisors: Vec<u64> = diag[..rank].iter().map(|d| d.to_u64().expect("bounded above")).collect();
        let basis: Vec<Vec<BigInt>> = (0..rank).map(|i| snf.v_inv.row(i).to_vec()).collect();

        let mut out = Vec::new();
        let mut choice = vec![0u64; rank];
        loop {
            let rhs = (0..rank)
                .map(|i| {
                    let d = BigRational::from(diag[i].clone());
                    frac(&((&ur[i] + BigRational::from(BigInt::from(choice[i]))) / d))
                })
                .collect();
            let comp = TorsionCoset {
                ambient_rank: self.ambient_rank,
                equations: basis.clone(),
                rhs,
            };
            match comp.normalize() {
                Normalized::Coset { canonical, .. } => out.push(canonical),
                Normalized::Empty => unreachable!("a component of a nonempty coset is nonempty"),
            }
            // odometer over the root choices
            let mut i = 0;
            while i < rank {
                choice[i] += 1;
                if choice[i] < divisors[i] {
                    break;
                }
                choice[i] = 0;
                i += 1;
            }
            if i == rank {
                break;
            }
        }
        out.sort_by_key(TorsionCoset::sort_key);
        Ok(out)
    }

    fn sort_key(&self) -> (Vec<Vec<BigInt>>, Vec<BigRational>) {
        (self.equations.clone(), self.rhs.clone())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "ambient_rank": self.ambient_rank,
            "equations": self.equations.iter()
                .map(|r| r.iter().map(int_to_json).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
            "rhs": self.rhs.iter().map(|r| r.to_string()).collect::<Vec<_>>(),
        })
    }

    /// Accepts `{"equations": [[int]], "rhs": ["p/q"]}` with an optional
    /// `"ambient_rank"`; it is required when there are no equations.
    pub fn from_json(v: &Value, ambient_rank: Option<usize>) -> Result<Self, TorusError> {
        let obj = v.as_object().ok_or_else(|| parse_err("coset", "expected an object"))?;
        let eqs = obj
            .get("equations")
            .and_then(Value::as_array)
            .ok_or_else(|| parse_err("coset.equations", "expected an array of integer rows"))?;
        let mut equations = Vec::with_capacity(eqs.len());
        for (i, row) in eqs.iter().enumerate() {
            let row = row
                .as_array()
                .ok_or_else(|| parse_err(&format!("equations[{i}]"), "expected an array"))?;
            let mut out = Vec::with_capacity(row.len());
            for (j, e) in row.iter().enumerate() {
                let n = match e {
                    Value::Number(n) => n.to_string().parse::<BigInt>().ok(),
                    Value::String(t) => t.trim().parse::<BigInt>().ok(),
                    _ => None,
                }
                .ok_or_else(|| parse_err(&format!("equations[{i}][{j}]"), "expected an integer"))?;
                out.push(n);
            }
            equations.push(out);
        }
        let rhs_items = obj
            .get("rhs")
            .and_then(Value::as_array)
            .ok_or_else(|| parse_err("coset.rhs", "expected an array of rationals"))?;
        let mut rhs = Vec::with_capacity(rhs_items.len());
        for (i, r) in rhs_items.iter().enumerate() {
            let q = match r {
                Value::String(s) => parse_rational(s),
                Value::Number(n) => parse_rational(&n.to_string()),
                _ => None,
            }
            .ok_or_else(|| parse_err(&format!("rhs[{i}]"), "expected a rational such as \"1/2\""))?;
            rhs.push(q);
        }
        let declared = match obj.get("ambient_rank") {
            None => None,
            Some(v) => Some(
                v.as_u64()
                    .ok_or_else(|| parse_err("ambient_rank", "expected a positive integer"))? as usize,
            ),
        };
        let b = declared
            .or(ambient_rank)
            .or_else(|| equations.first().map(Vec::len))
            .ok_or_else(|| parse_err("ambient_rank", "required when there are no equations"))?;
        if let (Some(d), Some(outer)) = (declared, ambient_rank) {
            check_rank(outer, d)?;
        }
        Self::new(b, equations, rhs)
    }
}

impl fmt::Display for TorsionCoset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.equations.is_empty() {
            return write!(f, "(C*)^{}", self.ambient_rank);
        }
        let parts: Vec<String> = self
            .equations
            .iter()
            .zip(&self.rhs)
            .map(|(row, r)| {
                let mono: Vec<String> = row
                    .iter()
                    .enumerate()
                    .filter(|(_, e)| !e.is_zero())
                    .map(|(i, e)| {
                        if e.is_one() {
                            format!("t{}", i + 1)
                        } else {
                            format!("t{}^{}", i + 1, e)
                        }
                    })
                    .collect();
                let value = if r.is_zero() {
                    "1".to_string()
                } else {
                    format!("exp(2πi*{r})")
                };
                format!("{}={value}", mono.join("*"))
            })
            .collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// Intersection as a finite list of connected translated subtori.
pub fn intersect_cosets(a: &TorsionCoset, b: &TorsionCoset) -> Result<Vec<TorsionCoset>, TorusError> {
    check_rank(a.ambient_rank, b.ambient_rank)?;
    let stacked = TorsionCoset {
        ambient_rank: a.ambient_rank,
        equations: a.equations.iter().chain(&b.equations).cloned().collect(),
        rhs: a.rhs.iter().chain(&b.rhs).cloned().collect(),
    };
    stacked.components()
}

fn check_rank(left: usize, right: usize) -> Result<(), TorusError> {
    if left == right {
        Ok(())
    } else {
        Err(TorusError::RankMismatch { left, right })
    }
}

fn apply_rational(m: &IntMatrix, v: &[BigRational]) -> Vec<BigRational> {
    (0..m.nrows())
        .map(|i| {
            m.row(i)
                .iter()
                .zip(v)
                .fold(BigRational::zero(), |acc, (a, x)| acc + x * BigRational::from(a.clone()))
        })
        .collect()
}

/// Integers beyond `i64` are written as strings.
fn int_to_json(e: &BigInt) -> Value {
    e.to_i64().map(Value::from).unwrap_or_else(|| Value::from(e.to_string()))
}

fn parse_err(field: &str, msg: &str) -> TorusError {
    TorusError::Parse(format!("{field}: {msg}"))
}

pub(crate) fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let q: BigInt = q.trim().parse().ok()?;
            if q.is_zero() {
                return None;
            }
            Some(BigRational::new(p.trim().parse().ok()?, q))
        }
        None => Some(BigRational::from(s.parse::<BigInt>().ok()?)),
    }
}

/// A point of finite order, stored by its exponents in `[0, 1)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TorsionPoint {
    exponents: Vec<BigRational>,
}

impl TorsionPoint {
    pub fn new(exponents: Vec<BigRational>) -> Self {
        TorsionPoint {
            exponents: exponents.iter().map(frac).collect(),
        }
    }

    pub fn from_ratios(items: &[(i64, i64)]) -> Self {
        Self::new(items.iter().map(|&(p, q)| BigRational::new(p.into(), q.into())).collect())
    }

    pub fn exponents(&self) -> &[BigRational] {
        &self.exponents
    }

    pub fn rank(&self) -> usize {
        self.exponents.len()
    }

    /// Number of coordinates equal to 1.
    pub fn trivial_coordinates(&self) -> usize {
        self.exponents.iter().filter(|v| v.is_zero()).count()
    }

    /// Every point of `(C*)^b` whose coordinates are `n`-th roots of unity,
    /// in lexicographic order.
    pub fn all_of_order_dividing(rank: usize, n: u32) -> Vec<TorsionPoint> {
        let mut out = Vec::new();
        let total = (n as usize).pow(rank as u32);
        for mut idx in 0..total {
            let mut ex = vec![BigRational::zero(); rank];
            for slot in ex.iter_mut().rev() {
                *slot = BigRational::new(BigInt::from(idx % n as usize), BigInt::from(n));
                idx /= n as usize;
            }
            out.push(TorsionPoint { exponents: ex });
        }
        out
    }

    /// Parses `"1/3,0"` or `"(1/3, 0)"`.
    pub fn parse(text: &str) -> Result<Self, TorusError> {
        let body = text.trim().trim_start_matches('(').trim_end_matches(')');
        if body.trim().is_empty() {
            return Err(TorusError::Parse("empty point".into()));
        }
        let mut ex = Vec::new();
        for (i, part) in body.split(',').enumerate() {
            let q = parse_rational(part)
                .ok_or_else(|| TorusError::Parse(format!("coordinate {i}: {:?} is not a rational", part.trim())))?;
            ex.push(q);
        }
        Ok(Self::new(ex))
    }

    /// Coordinates as exact scalars. Only orders 1, 2, 3, 4 and 6 live in a
    /// quadratic field; anything else is reported as unrepresentable.
    pub fn to_scalars(&self) -> Result<Vec<Scalar>, TorusError> {
        self.exponents.iter().map(root_of_unity).collect()
    }

    /// Inverse of `to_scalars`.
    pub fn from_scalars(values: &[Scalar]) -> Result<Self, TorusError> {
        let mut ex = Vec::with_capacity(values.len());
        for v in values {
            let hit = [1i64, 2, 3, 4, 6].iter().find_map(|&n| {
                (0..n).find_map(|k| {
                    let q = BigRational::new(k.into(), n.into());
                    (root_of_unity(&q).ok()? == *v).then_some(q)
                })
            });
            ex.push(hit.ok_or_else(|| TorusError::Unrepresentable(format!("{v} is not a root of unity of order 1, 2, 3, 4 or 6")))?);
        }
        Ok(TorsionPoint { exponents: ex })
    }
}

impl fmt::Display for TorsionPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.exponents.iter().map(|q| q.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

fn root_of_unity(q: &BigRational) -> Result<Scalar, TorusError> {
    let q = frac(q);
    let (num, den) = (q.numer().to_i64(), q.denom().to_i64());
    let half = || BigRational::new(1.into(), 2.into());
    let s = match (num, den) {
        (Some(0), _) => Scalar::one(),
        (Some(1), Some(2)) => Scalar::from_int(-1),
        (Some(1), Some(4)) => Scalar::new(BigRational::zero(), BigRational::one(), BigInt::from(-1)),
        (Some(3), Some(4)) => Scalar::new(BigRational::zero(), -BigRational::one(), BigInt::from(-1)),
        (Some(1), Some(3)) => Scalar::new(-half(), half(), BigInt::from(-3)),
        (Some(2), Some(3)) => Scalar::new(-half(), -half(), BigInt::from(-3)),
        (Some(1), Some(6)) => Scalar::new(half(), half(), BigInt::from(-3)),
        (Some(5), Some(6)) => Scalar::new(half(), -half(), BigInt::from(-3)),
        _ => {
            return Err(TorusError::Unrepresentable(format!(
                "exp(2πi*{q}) does not lie in a quadratic field"
            )))
        }
    };
    Ok(s)
}

/// A Boolean combination of torsion cosets in a fixed ambient torus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorusFormula {
    ambient_rank: usize,
    formula: Formula<TorsionCoset>,
}

impl TorusFormula {
    pub fn new(ambient_rank: usize, formula: Formula<TorsionCoset>) -> Result<Self, TorusError> {
        for leaf in formula.leaves() {
            check_rank(ambient_rank, leaf.ambient_rank)?;
        }
        Ok(TorusFormula { ambient_rank, formula })
    }

    pub fn coset(c: TorsionCoset) -> Self {
        TorusFormula {
            ambient_rank: c.ambient_rank,
            formula: Formula::Leaf(c),
        }
    }

    pub fn empty(ambient_rank: usize) -> Self {
        TorusFormula {
            ambient_rank,
            formula: Formula::False,
        }
    }

    pub fn full(ambient_rank: usize) -> Self {
        TorusFormula {
            ambient_rank,
            formula: Formula::True,
        }
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    pub fn formula(&self) -> &Formula<TorsionCoset> {
        &self.formula
    }

    pub fn union(&self, other: &TorusFormula) -> Result<TorusFormula, TorusError> {
        check_rank(self.ambient_rank, other.ambient_rank)?;
        Ok(TorusFormula {
            ambient_rank: self.ambient_rank,
            formula: self.formula.clone().or(other.formula.clone()),
        })
    }

    pub fn intersect(&self, other: &TorusFormula) -> Result<TorusFormula, TorusError> {
        check_rank(self.ambient_rank, other.ambient_rank)?;
        Ok(TorusFormula {
            ambient_rank: self.ambient_rank,
            formula: self.formula.clone().and(other.formula.clone()),
        })
    }

    pub fn complement(&self) -> TorusFormula {
        TorusFormula {
            ambient_rank: self.ambient_rank,
            formula: self.formula.clone().not(),
        }
    }

    /// If the formula is a single coset, returns it.
    pub fn as_coset(&self) -> Option<&TorsionCoset> {
        match &self.formula {
            Formula::Leaf(c) => Some(c),
            _ => None,
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "ambient_rank": self.ambient_rank,
            "formula": node_to_json(&self.formula),
        })
    }

    /// Header line followed by one line of JSON.
    pub fn to_file_string(&self) -> String {
        let body = serde_json::to_string(&self.to_json()).expect("json values always serialize");
        format!("{TORUS_HEADER}\n{body}\n")
    }

    /// Reads either a formula file or a bare coset. Lines starting with `#`
    /// are ignored.
    pub fn from_file_str(text: &str) -> Result<Self, TorusError> {
        let body: String = text
            .lines()
            .filter(|l| !l.trim_start().starts_with('#'))
            .collect::<Vec<_>>()
            .join("\n");
        let v: Value = serde_json::from_str(&body).map_err(|e| TorusError::Parse(e.to_string()))?;
        Self::from_json(&v)
    }

    pub fn from_json(v: &Value) -> Result<Self, TorusError> {
        let obj = v.as_object().ok_or_else(|| parse_err("document", "expected an object"))?;
        match obj.get("formula") {
            Some(node) => {
                let b = obj
                    .get("ambient_rank")
                    .and_then(Value::as_u64)
                    .ok_or_else(|| parse_err("ambient_rank", "expected a positive integer"))?
                    as usize;
                if b == 0 {
                    return Err(parse_err("ambient_rank", "expected a positive integer"));
                }
                let formula = node_from_json(node, b, "formula")?;
                Self::new(b, formula)
            }
            None => Ok(Self::coset(TorsionCoset::from_json(v, None)?)),
        }
    }
}

fn node_to_json(f: &Formula<TorsionCoset>) -> Value {
    match f {
        Formula::True => Value::from("true"),
        Formula::False => Value::from("false"),
        Formula::Leaf(c) => {
            let mut v = c.to_json();
            v.as_object_mut().expect("object").remove("ambient_rank");
            json!({ "coset": v })
        }
        Formula::Not(g) => json!({ "not": node_to_json(g) }),
        Formula::And(gs) => json!({ "and": gs.iter().map(node_to_json).collect::<Vec<_>>() }),
        Formula::Or(gs) => json!({ "or": gs.iter().map(node_to_json).collect::<Vec<_>>() }),
    }
}

fn node_from_json(v: &Value, b: usize, path: &str) -> Result<Formula<TorsionCoset>, TorusError> {
    match v {
        Value::String(s) if s == "true" => return Ok(Formula::True),
        Value::String(s) if s == "false" => return Ok(Formula::False),
        Value::Object(obj) if obj.len() == 1 => {
            let (key, inner) = obj.iter().next().expect("one entry");
            let children = |name: &str| -> Result<Vec<Formula<TorsionCoset>>, TorusError> {
                let items = inner
                    .as_array()
                    .ok_or_else(|| parse_err(&format!("{path}.{name}"), "expected an array"))?;
                items
                    .iter()
                    .enumerate()
                    .map(|(i, c)| node_from_json(c, b, &format!("{path}.{name}[{i}]")))
                    .collect()
            };
            match key.as_str() {
                "coset" => return Ok(Formula::Leaf(TorsionCoset::from_json(inner, Some(b))?)),
                "not" => return Ok(node_from_json(inner, b, &format!("{path}.not"))?.not()),
                "and" => return Ok(Formula::all(children("and")?)),
                "or" => return Ok(Formula::any(children("or")?)),
                _ => {}
            }
        }
        _ => {}
    }
    Err(parse_err(path, "expected \"true\", \"false\", or an object with one key coset/not/and/or"))
}

/// Exact membership of a torsion point.
pub fn member_torsion(f: &TorusFormula, p: &TorsionPoint) -> Result<bool, TorusError> {
    check_rank(f.ambient_rank, p.rank())?;
    Ok(f.formula.eval(&mut |c| c.contains(p).expect("ranks checked on construction")))
}

/// Characters of `(C*)^n` whose rank-1 pushforward has length exactly `k`,
/// i.e. exactly `k - 1` of the monodromies are trivial.
pub fn rank1_jump_locus(n: usize, k: usize) -> Result<TorusFormula, TorusError> {
    if n == 0 {
        return Err(TorusError::Shape("at least one puncture is required".into()));
    }
    if k == 0 || k - 1 > n {
        return Ok(TorusFormula::empty(n));
    }
    let want = k - 1;
    let mut cells = Vec::new();
    for mask in 0u64..(1u64 << n) {
        if mask.count_ones() as usize != want {
            continue;
        }
        let cell = Formula::all((0..n).map(|p| {
            let leaf = Formula::Leaf(TorsionCoset::coordinate_is_one(n, p));
            if mask >> p & 1 == 1 {
                leaf
            } else {
                leaf.not()
            }
        }));
        cells.push(cell);
    }
    TorusFormula::new(n, Formula::any(cells))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::local_system::{pushforward_length, Pushforward, Representation};
    use num_integer::Integer;

    fn coset(b: usize, eqs: &[Vec<i64>], rhs: &[(i64, i64)]) -> TorsionCoset {
        TorsionCoset::from_ints(b, eqs, rhs).unwrap()
    }

    fn pt(items: &[(i64, i64)]) -> TorsionPoint {
        TorsionPoint::from_ratios(items)
    }

    #[test]
    fn normalize_examples() {
        match coset(2, &[vec![1, 0]], &[(0, 1)]).normalize() {
            Normalized::Coset { dimension, .. } => assert_eq!(dimension, 1),
            Normalized::Empty => panic!("nonempty"),
        }
        assert!(coset(2, &[vec![1, 0], vec![1, 0]], &[(0, 1), (1, 2)]).is_empty());
        let c = coset(2, &[vec![2, 0]], &[(0, 1)]);
        match c.normalize() {
            Normalized::Coset { dimension, .. } => assert_eq!(dimension, 1),
            Normalized::Empty => panic!("nonempty"),
        }
        let comps = c.components().unwrap();
        assert_eq!(
            comps,
            vec![coset(2, &[vec![1, 0]], &[(0, 1)]), coset(2, &[vec![1, 0]], &[(1, 2)])]
        );
    }

    #[test]
    fn canonical_form_is_set_invariant() {
        let a = coset(2, &[vec![1, 1], vec![1, -1]], &[(0, 1), (0, 1)]);
        let b = coset(2, &[vec![1, -1], vec![2, 0]], &[(0, 1), (0, 1)]);
        assert_eq!(a.normalize(), b.normalize());
    }

    #[test]
    fn intersect_examples() {
        let t1 = TorsionCoset::coordinate_is_one(2, 0);
        let t2 = TorsionCoset::coordinate_is_one(2, 1);
        assert_eq!(intersect_cosets(&t1, &t2).unwrap(), vec![TorsionCoset::point(&pt(&[(0, 1), (0, 1)]))]);

        let a = coset(2, &[vec![1, 1]], &[(0, 1)]);
        let b = coset(2, &[vec![1, -1]], &[(0, 1)]);
        let got = intersect_cosets(&a, &b).unwrap();
        let expect = vec![
            TorsionCoset::point(&pt(&[(0, 1), (0, 1)])),
            TorsionCoset::point(&pt(&[(1, 2), (1, 2)])),
        ];
        assert_eq!(got, expect);

        let m1 = coset(1, &[vec![1]], &[(1, 2)]);
        let one = coset(1, &[vec![1]], &[(0, 1)]);
        assert!(intersect_cosets(&m1, &one).unwrap().is_empty());

        assert!(matches!(
            intersect_cosets(&t1, &TorsionCoset::full(3)),
            Err(TorusError::RankMismatch { .. })
        ));
    }

    #[test]
    fn guard_rejects_huge_splittings() {
        let c = coset(2, &[vec![200, 0], vec![0, 200]], &[(0, 1), (0, 1)]);
        assert!(matches!(c.components(), Err(TorusError::DivisorProductTooLarge(_))));
    }

    #[test]
    fn membership_examples() {
        let t1 = TorusFormula::coset(TorsionCoset::coordinate_is_one(2, 0));
        assert!(member_torsion(&t1, &pt(&[(0, 1), (0, 1)])).unwrap());
        assert!(!member_torsion(&t1, &pt(&[(1, 3), (0, 1)])).unwrap());
        let prod = TorusFormula::coset(coset(2, &[vec![1, 1]], &[(0, 1)]));
        assert!(member_torsion(&prod, &pt(&[(1, 2), (1, 2)])).unwrap());
        assert!(member_torsion(&t1, &pt(&[(0, 1)])).is_err());
    }

    #[test]
    fn jump_locus_examples() {
        let f = rank1_jump_locus(1, 2).unwrap();
        assert_eq!(f.as_coset(), Some(&TorsionCoset::coordinate_is_one(1, 0)));

        let f = rank1_jump_locus(2, 3).unwrap();
        let pts = TorsionPoint::all_of_order_dividing(2, 12);
        let inside: Vec<_> = pts.iter().filter(|p| member_torsion(&f, p).unwrap()).collect();
        assert_eq!(inside, vec![&pt(&[(0, 1), (0, 1)])]);

        let f = rank1_jump_locus(2, 1).unwrap();
        assert!(member_torsion(&f, &pt(&[(1, 2), (1, 2)])).unwrap());
        assert!(!member_torsion(&f, &pt(&[(0, 1), (1, 2)])).unwrap());

        assert_eq!(rank1_jump_locus(2, 4).unwrap(), TorusFormula::empty(2));
        assert_eq!(rank1_jump_locus(2, 0).unwrap(), TorusFormula::empty(2));
    }

    #[test]
    fn jump_locus_matches_pushforward() {
        let mut checked = 0;
        for p in TorsionPoint::all_of_order_dividing(2, 12) {
            let Ok(values) = p.to_scalars() else { continue };
            // coordinates in Q(i) and Q(√-3) at once have no common quadratic field
            let Ok(rep) = Representation::rank1(values) else { continue };
            let len = pushforward_length(&rep, Pushforward::Star).unwrap();
            assert!(member_torsion(&rank1_jump_locus(2, len).unwrap(), &p).unwrap(), "{p}");
            checked += 1;
        }
        // 4² points over Q(i) and 6² over Q(√-3), sharing the 2² rational ones
        assert_eq!(checked, 48);
    }

    #[test]
    fn roots_of_unity_round_trip() {
        for n in [1i64, 2, 3, 4, 6] {
            for k in 0..n {
                let p = pt(&[(k, n)]);
                let s = p.to_scalars().unwrap();
                let order = (1..=6).find(|&m| {
                    let mut acc = Scalar::one();
                    for _ in 0..m {
                        acc = &acc * &s[0];
                    }
                    acc.is_one()
                });
                assert_eq!(order, Some(n / k.gcd(&n)));
                assert_eq!(TorsionPoint::from_scalars(&s).unwrap(), p);
            }
        }
        assert!(pt(&[(1, 5)]).to_scalars().is_err());
    }

    #[test]
    fn json_round_trip() {
        let f = rank1_jump_locus(3, 2).unwrap();
        let back = TorusFormula::from_file_str(&f.to_file_string()).unwrap();
        assert_eq!(back, f);

        let text = r#"{ "equations": [[1, 1]], "rhs": ["1/2"] }"#;
        let c = TorusFormula::from_file_str(text).unwrap();
        assert_eq!(c.as_coset(), Some(&coset(2, &[vec![1, 1]], &[(1, 2)])));

        let err = TorusFormula::from_file_str(r#"{ "equations": [[1, "a"]], "rhs": ["0"] }"#).unwrap_err();
        assert!(err.to_string().contains("equations[0][1]"), "{err}");
    }

    #[test]
    fn point_parsing() {
        assert_eq!(TorsionPoint::parse("1/3,0").unwrap(), pt(&[(1, 3), (0, 1)]));
        assert_eq!(TorsionPoint::parse("(5/4, -1/2)").unwrap(), pt(&[(1, 4), (1, 2)]));
        assert!(TorsionPoint::parse("x,0").is_err());
        assert_eq!(pt(&[(1, 3), (0, 1)]).to_string(), "(1/3, 0)");
    }
}
