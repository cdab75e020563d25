//! Constructible subsets of affine space written as Boolean formulas over
//! polynomial-vanishing atoms with rational coefficients.

use std::fmt::Write as _;

use num_rational::BigRational;
use num_traits::One;

use crate::algebra::{RadicalSum, Scalar};
use crate::formula::{Formula, FormulaError};
use crate::poly::Poly;

pub const FORMULA_HEADER: &str = "# perv formula v1";
pub const SAMPLE_HEADER: &str = "# perv sample v1";

/// The locus `p = 0` for a non-constant polynomial `p`, stored primitive with
/// positive leading coefficient so equal loci compare equal.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct PolyAtom {
    poly: Poly,
}

impl PolyAtom {
    /// `None` for constant polynomials, which are not atoms.
    pub fn new(poly: &Poly) -> Option<Self> {
        (!poly.is_constant()).then(|| PolyAtom {
            poly: poly.primitive(),
        })
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    pub fn vanishes_at(&self, point: &[RadicalSum]) -> bool {
        self.poly.eval(point).is_zero()
    }

    /// `var = var`, `var = c` for the two-term linear atoms, else `p=0`.
    pub fn equation(&self, vars: &[String]) -> String {
        let terms: Vec<_> = self.poly.terms().rev().collect();
        if self.poly.is_linear() && terms.len() == 2 {
            let (m0, c0) = terms[0];
            let (m1, c1) = terms[1];
            let var_of = |m: &Vec<u32>| m.iter().position(|&e| e == 1);
            let lhs = &vars[var_of(m0).expect("linear term")];
            if c0.is_one() {
                match var_of(m1) {
                    Some(j) if (-c1).is_one() => return format!("{lhs}={}", vars[j]),
                    None => return format!("{lhs}={}", -c1),
                    _ => {}
                }
            }
        }
        format!("{}=0", self.poly.display(vars))
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PolyConstructibleSet {
    vars: Vec<String>,
    formula: Formula<PolyAtom>,
}

impl PolyConstructibleSet {
    pub fn new(vars: Vec<String>, formula: Formula<PolyAtom>) -> Self {
        debug_assert!(formula.leaves().iter().all(|a| a.poly.nvars() == vars.len()));
        PolyConstructibleSet { vars, formula }
    }

    pub fn empty(vars: Vec<String>) -> Self {
        Self::new(vars, Formula::False)
    }

    pub fn full(vars: Vec<String>) -> Self {
        Self::new(vars, Formula::True)
    }

    /// `{p = 0}`, folding constant polynomials to the full or empty set.
    pub fn zero_locus(vars: Vec<String>, poly: &Poly) -> Self {
        Self::new(vars, atom_formula(poly))
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn formula(&self) -> &Formula<PolyAtom> {
        &self.formula
    }

    fn check_context(&self, other: &Self) -> Result<(), FormulaError> {
        if self.vars != other.vars {
            return Err(FormulaError::ContextMismatch {
                left: self.vars.clone(),
                right: other.vars.clone(),
            });
        }
        Ok(())
    }

    pub fn union(&self, other: &Self) -> Result<Self, FormulaError> {
        self.check_context(other)?;
        Ok(Self::new(self.vars.clone(), self.formula.clone().or(other.formula.clone())))
    }

    pub fn intersect(&self, other: &Self) -> Result<Self, FormulaError> {
        self.check_context(other)?;
        Ok(Self::new(self.vars.clone(), self.formula.clone().and(other.formula.clone())))
    }

    pub fn complement(&self) -> Self {
        Self::new(self.vars.clone(), self.formula.clone().not())
    }

    /// `self \ other`.
    pub fn difference(&self, other: &Self) -> Result<Self, FormulaError> {
        self.intersect(&other.complement())
    }

    pub fn member(&self, point: &[Scalar]) -> Result<bool, FormulaError> {
        if point.len() != self.vars.len() {
            return Err(FormulaError::Dimension {
                expected: self.vars.len(),
                got: point.len(),
            });
        }
        let point: Vec<RadicalSum> = point.iter().map(Scalar::to_radical).collect();
        Ok(self.member_radical(&point))
    }

    pub fn member_radical(&self, point: &[RadicalSum]) -> bool {
        self.formula.eval(&mut |a| a.vanishes_at(point))
    }

    /// Distinct atoms in first-occurrence order.
    pub fn atoms(&self) -> Vec<PolyAtom> {
        let mut out: Vec<PolyAtom> = Vec::new();
        for a in self.formula.leaves() {
            if !out.contains(a) {
                out.push(a.clone());
            }
        }
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{FORMULA_HEADER}\nvars {}\n", self.vars.join(" "));
        write_node(&self.formula, &self.vars, 0, &mut out);
        out
    }

    pub fn from_text(text: &str) -> Result<Self, FormulaError> {
        let mut lines = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty() && !l.starts_with('#'));
        let (vline, first) = lines.next().ok_or(FormulaError::Parse("empty formula file".into()))?;
        let vars: Vec<String> = first
            .strip_prefix("vars")
            .ok_or(FormulaError::Line {
                line: vline + 1,
                msg: "expected `vars ...`".into(),
            })?
            .split_whitespace()
            .map(String::from)
            .collect();
        let body: Vec<(usize, usize, &str)> = lines
            .map(|(i, l)| {
                let indent = l.len() - l.trim_start().len();
                (i + 1, indent, l.trim())
            })
            .collect();
        let mut pos = 0;
        let formula = parse_node(&body, &mut pos, 0, &vars)?;
        if pos != body.len() {
            return Err(FormulaError::Line {
                line: body[pos].0,
                msg: "unexpected extra node".into(),
            });
        }
        Ok(Self::new(vars, formula))
    }

    /// Set-builder rendering of a union of conjunctions of atoms, e.g.
    /// `{x=2, y=z} ∪ {y=2, x=z}`; other shapes fall back to infix.
    pub fn notation(&self) -> String {
        let disjuncts: Vec<&Formula<PolyAtom>> = match &self.formula {
            Formula::True => return format!("C^{}", self.vars.len()),
            Formula::False => return "∅".into(),
            Formula::Or(fs) => fs.iter().collect(),
            f => vec![f],
        };
        let mut parts = Vec::new();
        for d in disjuncts {
            let atoms: Vec<&PolyAtom> = match d {
                Formula::Leaf(a) => vec![a],
                Formula::And(fs) if fs.iter().all(|f| matches!(f, Formula::Leaf(_))) => {
                    fs.iter().flat_map(Formula::leaves).collect()
                }
                _ => return infix(&self.formula, &self.vars),
            };
            parts.push(match pinned_point(&atoms, self.vars.len()) {
                Some(pt) => format!("{{({})}}", pt.join(",")),
                None => {
                    let eqs: Vec<String> = atoms.iter().map(|a| a.equation(&self.vars)).collect();
                    format!("{{{}}}", eqs.join(", "))
                }
            });
        }
        parts.join(" ∪ ")
    }
}

fn atom_formula(poly: &Poly) -> Formula<PolyAtom> {
    match PolyAtom::new(poly) {
        Some(a) => Formula::Leaf(a),
        None if poly.is_zero() => Formula::True,
        None => Formula::False,
    }
}

/// If the atoms are `v_i - c_i` for every variable, the point `(c_i)`.
fn pinned_point(atoms: &[&PolyAtom], nvars: usize) -> Option<Vec<String>> {
    let mut coords: Vec<Option<BigRational>> = vec![None; nvars];
    for a in atoms {
        let p = a.poly();
        let support = p.support();
        if !p.is_linear() || support.len() != 1 {
            return None;
        }
        let v = support[0];
        let mut mono = vec![0; nvars];
        mono[v] = 1;
        let coeff = p.terms().find(|(m, _)| **m == mono).map(|(_, c)| c.clone())?;
        coords[v] = Some(-p.constant_term() / coeff);
    }
    coords.into_iter().map(|c| c.map(|c| c.to_string())).collect()
}

fn infix(f: &Formula<PolyAtom>, vars: &[String]) -> String {
    match f {
        Formula::True => "true".into(),
        Formula::False => "false".into(),
        Formula::Leaf(a) => format!("{{{}}}", a.equation(vars)),
        Formula::Not(g) => format!("¬{}", infix(g, vars)),
        Formula::And(gs) => format!("({})", gs.iter().map(|g| infix(g, vars)).collect::<Vec<_>>().join(" ∧ ")),
        Formula::Or(gs) => format!("({})", gs.iter().map(|g| infix(g, vars)).collect::<Vec<_>>().join(" ∨ ")),
    }
}

fn write_node(f: &Formula<PolyAtom>, vars: &[String], depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    match f {
        Formula::True => {
            let _ = writeln!(out, "{pad}true");
        }
        Formula::False => {
            let _ = writeln!(out, "{pad}false");
        }
        Formula::Leaf(a) => {
            let _ = writeln!(out, "{pad}atom {}", a.poly().display(vars));
        }
        Formula::Not(g) => {
            let _ = writeln!(out, "{pad}not");
            write_node(g, vars, depth + 1, out);
        }
        Formula::And(gs) | Formula::Or(gs) => {
            let tag = if matches!(f, Formula::And(_)) { "and" } else { "or" };
            let _ = writeln!(out, "{pad}{tag}");
            for g in gs {
                write_node(g, vars, depth + 1, out);
            }
        }
    }
}

fn parse_node(
    body: &[(usize, usize, &str)],
    pos: &mut usize,
    indent: usize,
    vars: &[String],
) -> Result<Formula<PolyAtom>, FormulaError> {
    let Some(&(line, ind, text)) = body.get(*pos) else {
        return Err(FormulaError::Parse("missing formula node".into()));
    };
    let err = |msg: String| FormulaError::Line { line, msg };
    if ind != indent {
        return Err(err(format!("expected indentation {indent}, found {ind}")));
    }
    *pos += 1;
    let children = |pos: &mut usize| -> Result<Vec<Formula<PolyAtom>>, FormulaError> {
        let mut kids = Vec::new();
        while body.get(*pos).is_some_and(|&(_, i, _)| i > indent) {
            kids.push(parse_node(body, pos, indent + 2, vars)?);
        }
        Ok(kids)
    };
    match text.split_once(' ').map_or((text, ""), |(a, b)| (a, b)) {
        ("true", "") => Ok(Formula::True),
        ("false", "") => Ok(Formula::False),
        ("atom", poly) => {
            let p = Poly::parse(poly, vars).map_err(|e| err(e.to_string()))?;
            Ok(atom_formula(&p))
        }
        ("not", "") => {
            let mut kids = children(pos)?;
            if kids.len() != 1 {
                return Err(err(format!("`not` takes one child, found {}", kids.len())));
            }
            Ok(kids.pop().unwrap().not())
        }
        ("and", "") => Ok(Formula::all(children(pos)?)),
        ("or", "") => Ok(Formula::any(children(pos)?)),
        _ => Err(err(format!("unknown node {text:?}"))),
    }
}

/// Simplifies a conjunction of vanishing conditions: linear atoms are solved
/// for their leading variable and substituted into the rest, and any atom that
/// becomes a perfect square is replaced by its root. Returns `None` when the
/// conjunction is inconsistent.
pub fn simplify_conjunction(atoms: &[PolyAtom]) -> Option<Vec<PolyAtom>> {
    let mut pending: Vec<Poly> = atoms.iter().map(|a| a.poly().clone()).collect();
    let mut solved: Vec<(usize, Poly)> = Vec::new();
    loop {
        let mut next = Vec::new();
        for p in &pending {
            let mut q = p.clone();
            for (v, rhs) in &solved {
                q = q.substitute(*v, rhs);
            }
            if q.is_zero() {
                continue;
            }
            if q.is_constant() {
                return None;
            }
            q = q.primitive();
            while let Some(r) = q.sqrt() {
                if r.is_constant() {
                    break;
                }
                q = r.primitive();
            }
            if !next.contains(&q) {
                next.push(q);
            }
        }
        pending = next;
        let Some(i) = pending.iter().position(Poly::is_linear) else {
            break;
        };
        let lin = pending.remove(i);
        let v = lin.support()[0];
        let n = lin.nvars();
        let mut mono = vec![0; n];
        mono[v] = 1;
        let coeff = lin.terms().find(|(m, _)| **m == mono).map(|(_, c)| c.clone()).unwrap();
        let rest = lin.sub(&Poly::var(n, v).scale(&coeff));
        let rhs = rest.scale(&(-BigRational::one() / coeff));
        for (_, r) in solved.iter_mut() {
            *r = r.substitute(v, &rhs);
        }
        solved.push((v, rhs));
    }
    let mut out: Vec<PolyAtom> = solved
        .iter()
        .filter_map(|(v, rhs)| PolyAtom::new(&Poly::var(rhs.nvars(), *v).sub(rhs)))
        .collect();
    out.extend(pending.iter().filter_map(PolyAtom::new));
    Some(out)
}

/// A labelled point of a structured sample.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SamplePoint {
    pub label: String,
    pub coords: Vec<Scalar>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sample {
    pub vars: Vec<String>,
    pub points: Vec<SamplePoint>,
}

impl Sample {
    pub fn to_text(&self) -> String {
        let mut out = format!("{SAMPLE_HEADER}\nvars {}\n", self.vars.join(" "));
        for p in &self.points {
            out.push_str(&p.label);
            for c in &p.coords {
                let _ = write!(out, "\t{c}");
            }
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self, FormulaError> {
        let mut vars = None;
        let mut points = Vec::new();
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |msg: String| FormulaError::Line { line: i + 1, msg };
            let Some(vs) = &vars else {
                let rest = line.strip_prefix("vars").ok_or_else(|| err("expected `vars ...`".into()))?;
                vars = Some(rest.split_whitespace().map(String::from).collect::<Vec<_>>());
                continue;
            };
            let mut fields = line.split('\t');
            let label = fields.next().unwrap_or_default().to_string();
            let coords = fields
                .enumerate()
                .map(|(j, f)| f.parse::<Scalar>().map_err(|e| err(format!("coordinate {}: {e}", j + 1))))
                .collect::<Result<Vec<_>, _>>()?;
            if coords.len() != vs.len() {
                return Err(err(format!("expected {} coordinates, found {}", vs.len(), coords.len())));
            }
            points.push(SamplePoint { label, coords });
        }
        Ok(Sample {
            vars: vars.ok_or(FormulaError::Parse("sample file has no `vars` line".into()))?,
            points,
        })
    }
}

/// Outcome of comparing two sets on a finite sample.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Equivalence {
    Agree,
    /// A sample point in exactly one of the two sets.
    Witness(SamplePoint),
}

impl Equivalence {
    pub fn holds(&self) -> bool {
        matches!(self, Equivalence::Agree)
    }
}

/// Membership agreement of `s` and `t` on every sample point. Agreement is
/// evidence of equality, not a proof, unless the sample is known to separate
/// the atoms involved.
pub fn equivalent_on(
    s: &PolyConstructibleSet,
    t: &PolyConstructibleSet,
    sample: &[SamplePoint],
) -> Result<Equivalence, FormulaError> {
    s.check_context(t)?;
    for p in sample {
        if s.member(&p.coords)? != t.member(&p.coords)? {
            return Ok(Equivalence::Witness(p.clone()));
        }
    }
    Ok(Equivalence::Agree)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn xyz() -> Vec<String> {
        ["x", "y", "z"].map(String::from).to_vec()
    }

    fn locus(text: &str) -> PolyConstructibleSet {
        PolyConstructibleSet::zero_locus(xyz(), &Poly::parse(text, &xyz()).unwrap())
    }

    fn pt(coords: [i64; 3]) -> Vec<Scalar> {
        coords.map(Scalar::from_int).to_vec()
    }

    #[test]
    fn set_operation_examples() {
        let s = locus("x - 2");
        let empty = PolyConstructibleSet::empty(xyz());
        assert_eq!(empty.union(&s).unwrap(), s);
        assert_eq!(s.complement().complement(), s);
        let both = s.intersect(&locus("y - 2")).unwrap();
        assert_eq!(both.notation(), "{x=2, y=2}");
        assert!(both.member(&pt([2, 2, 7])).unwrap());
        assert!(!both.member(&pt([2, 1, 7])).unwrap());
        let other = PolyConstructibleSet::full(vec!["t".into()]);
        assert!(matches!(s.union(&other), Err(FormulaError::ContextMismatch { .. })));
        assert!(matches!(s.member(&pt([1, 2, 3])[..2]), Err(FormulaError::Dimension { .. })));
    }

    #[test]
    fn constant_loci_fold() {
        assert_eq!(locus("0").formula(), &Formula::True);
        assert_eq!(locus("3").formula(), &Formula::False);
    }

    #[test]
    fn equivalent_on_examples() {
        let s = locus("x - 2");
        let t = locus("y - 2");
        let sample: Vec<SamplePoint> = [[0, 0, 0], [2, 0, 0], [2, 2, 2]]
            .iter()
            .map(|c| SamplePoint {
                label: format!("{c:?}"),
                coords: pt(*c),
            })
            .collect();
        assert!(equivalent_on(&s, &s, &sample).unwrap().holds());
        match equivalent_on(&s, &t, &sample).unwrap() {
            Equivalence::Witness(p) => assert_eq!(p.coords, pt([2, 0, 0])),
            Equivalence::Agree => panic!("expected a witness"),
        }
    }

    #[test]
    fn quadratic_points() {
        // (2, phi + 1/phi, phi + 1/phi) with phi + 1/phi = sqrt 5 lies on y = z
        let r5: Scalar = "sqrt(5)".parse().unwrap();
        let s = locus("y - z");
        assert!(s.member(&[Scalar::from_int(2), r5.clone(), r5.clone()]).unwrap());
        // mixed fields are still decided exactly
        let r2: Scalar = "sqrt(2)".parse().unwrap();
        assert!(!s.member(&[Scalar::from_int(2), r5, r2.clone()]).unwrap());
        assert!(locus("z^2 - 2").member(&[Scalar::zero(), Scalar::zero(), r2]).unwrap());
    }

    #[test]
    fn conjunction_simplification() {
        let atoms = |xs: &[&str]| -> Vec<PolyAtom> {
            xs.iter()
                .map(|t| PolyAtom::new(&Poly::parse(t, &xyz()).unwrap()).unwrap())
                .collect()
        };
        let d = "z^2 - x*y*z + x^2 + y^2 - 4";
        assert_eq!(simplify_conjunction(&atoms(&["x - 2", d])).unwrap(), atoms(&["x - 2", "y - z"]));
        assert_eq!(
            simplify_conjunction(&atoms(&["x - 2", "y - 2", d])).unwrap(),
            atoms(&["x - 2", "y - 2", "z - 2"])
        );
        assert_eq!(simplify_conjunction(&atoms(&["x - z", "z - 2"])).unwrap(), atoms(&["x - 2", "z - 2"]));
        assert_eq!(simplify_conjunction(&atoms(&["x - 2", "x - 3"])), None);
        assert_eq!(simplify_conjunction(&atoms(&[d])).unwrap(), atoms(&[d]));
    }

    #[test]
    fn text_roundtrip() {
        let s = locus("x - 2")
            .intersect(&locus("y - z"))
            .unwrap()
            .union(&locus("z^2 - x*y*z + x^2 + y^2 - 4").complement())
            .unwrap();
        let text = s.to_text();
        assert!(text.starts_with(FORMULA_HEADER));
        assert_eq!(PolyConstructibleSet::from_text(&text).unwrap(), s);
        assert!(PolyConstructibleSet::from_text("vars x\nnot\n").is_err());
        assert!(PolyConstructibleSet::from_text("vars x\nbogus\n").is_err());
    }

    #[test]
    fn sample_text_roundtrip() {
        let sample = Sample {
            vars: xyz(),
            points: vec![SamplePoint {
                label: "phi".into(),
                coords: vec![Scalar::from_int(2), "3/2+1/2*sqrt(5)".parse().unwrap(), Scalar::ratio(-1, 3)],
            }],
        };
        assert_eq!(Sample::from_text(&sample.to_text()).unwrap(), sample);
        assert!(Sample::from_text("vars x y\np\t1\n").is_err());
    }

    fn arb_poly() -> impl Strategy<Value = Poly> {
        prop::collection::vec(((0u32..3, 0u32..3, 0u32..3), -5i64..6, 1i64..4), 1..5).prop_map(|ts| {
            Poly::from_terms(
                3,
                ts.into_iter()
                    .map(|((a, b, c), n, d)| (vec![a, b, c], BigRational::new(n.into(), d.into()))),
            )
        })
    }

    proptest! {
        #[test]
        fn atoms_are_canonical(p in arb_poly(), n in 1i64..7, d in 1i64..7, neg: bool) {
            let k = BigRational::new((if neg { -n } else { n }).into(), d.into());
            prop_assert_eq!(PolyAtom::new(&p), PolyAtom::new(&p.scale(&k)));
            // reparsing the printed form gives the same atom
            let reparsed = Poly::parse(&p.display(&xyz()), &xyz()).unwrap();
            prop_assert_eq!(PolyAtom::new(&reparsed), PolyAtom::new(&p));
        }

        #[test]
        fn member_respects_connectives(p in arb_poly(), q in arb_poly(), c in prop::array::uniform3(-2i64..3)) {
            let s = PolyConstructibleSet::zero_locus(xyz(), &p);
            let t = PolyConstructibleSet::zero_locus(xyz(), &q);
            let point = pt(c);
            let (a, b) = (s.member(&point).unwrap(), t.member(&point).unwrap());
            prop_assert_eq!(s.union(&t).unwrap().member(&point).unwrap(), a || b);
            prop_assert_eq!(s.intersect(&t).unwrap().member(&point).unwrap(), a && b);
            prop_assert_eq!(s.complement().member(&point).unwrap(), !a);
        }
    }
}
