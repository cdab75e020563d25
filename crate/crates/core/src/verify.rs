//! Reproduction checks for the jump-locus table and the supporting
//! identities, shared by the acceptance tests and `perv verify-paper`.
//!
//! Every check is deterministic: random inputs come from seeded ChaCha
//! streams.

use std::collections::BTreeSet;
use std::fmt;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{eig1_multiplicity, AlgebraError, Mat2, RadicalSum, Scalar, Vec2};
use crate::constructible::{equivalent_on, simplify_conjunction, Equivalence, PolyAtom, PolyConstructibleSet, SamplePoint};
use crate::formula::Formula;
use crate::local_system::{
    composition_factors, is_semisimple, pushforward_length, semisimplify, Pushforward, Representation,
};
use crate::poly::Poly;
use crate::torus::{
    hermite_normal_form, intersect_cosets, member_torsion, rank1_jump_locus, smith_normal_form, IntMatrix,
    Normalized, TorsionCoset, TorsionPoint,
};
use crate::trace::{discriminant_poly, is_reducible_point, length_from_traces, stratify, trace_coords, trace_vars, TracePoint};

const SEED: u64 = 0x5eed_1e57;

/// Outcome of one named check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckReport {
    pub name: String,
    pub passed: bool,
    /// Number of cases examined.
    pub cases: usize,
    /// Summary on success, first counterexample on failure.
    pub detail: String,
}

impl CheckReport {
    fn pass(name: impl Into<String>, cases: usize, detail: impl Into<String>) -> Self {
        CheckReport {
            name: name.into(),
            passed: true,
            cases,
            detail: detail.into(),
        }
    }

    fn fail(name: impl Into<String>, cases: usize, detail: impl Into<String>) -> Self {
        CheckReport {
            name: name.into(),
            passed: false,
            cases,
            detail: detail.into(),
        }
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{tag} {} [{} cases] {}", self.name, self.cases, self.detail)
    }
}

/// A numbered acceptance criterion with its runtime budget.
#[derive(Clone, Debug)]
pub struct Criterion {
    pub id: u8,
    pub title: &'static str,
    pub budget: Duration,
    pub elapsed: Duration,
    pub checks: Vec<CheckReport>,
}

impl Criterion {
    pub fn within_budget(&self) -> bool {
        self.elapsed < self.budget
    }

    pub fn passed(&self) -> bool {
        self.within_budget() && self.checks.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<&CheckReport> {
        self.checks.iter().find(|c| !c.passed)
    }

    /// One line: `PASS criterion N: title (elapsed)` plus the first failure.
    pub fn summary(&self) -> String {
        let tag = if self.passed() { "PASS" } else { "FAIL" };
        let mut line = format!(
            "{tag} criterion {}: {} ({:.2}s, budget {}s)",
            self.id,
            self.title,
            self.elapsed.as_secs_f64(),
            self.budget.as_secs()
        );
        if let Some(c) = self.first_failure() {
            line.push_str(&format!(" -- {}: {}", c.name, c.detail));
        } else if !self.within_budget() {
            line.push_str(" -- over the runtime budget");
        }
        line
    }
}

pub const CRITERIA: [(u8, &str, u64); 7] = [
    (1, "golden jump-locus table", 5),
    (2, "pointwise/symbolic length consistency", 30),
    (3, "length identities", 30),
    (4, "composition-series oracle", 30),
    (5, "torus coset calculus", 60),
    (6, "rank-1 jump loci", 30),
    (7, "existence theorems covered by criteria 1-6", 1),
];

/// Runs one criterion. Criterion 7 is the summary of 1 through 6 and runs
/// them all.
pub fn run_criterion(id: u8) -> Criterion {
    let (_, title, budget) = CRITERIA
        .iter()
        .copied()
        .find(|c| c.0 == id)
        .unwrap_or_else(|| panic!("no criterion {id}"));
    let start = Instant::now();
    let checks = match id {
        1 => golden_table_with(&stratify),
        2 => vec![consistency(1000)],
        3 => identities(500),
        4 => vec![composition_oracle(500)],
        5 => vec![torus_intersections(200), snf_random(500), normalize_dimensions(500)],
        6 => rank1_loci(3),
        7 => {
            // the reruns are timed against their own budgets
            let others: Vec<Criterion> = (1..=6).map(run_criterion).collect();
            return covered_by(&others, Instant::now());
        }
        _ => unreachable!(),
    };
    Criterion {
        id,
        title,
        budget: Duration::from_secs(budget),
        elapsed: start.elapsed(),
        checks,
    }
}

/// Runs criteria 1 through 6, then folds them into criterion 7.
pub fn run_all() -> Vec<Criterion> {
    let mut out: Vec<Criterion> = (1..=6).map(run_criterion).collect();
    let seven = covered_by(&out, Instant::now());
    out.push(seven);
    out
}

fn covered_by(others: &[Criterion], start: Instant) -> Criterion {
    let failing: Vec<String> = others.iter().filter(|c| !c.passed()).map(|c| c.id.to_string()).collect();
    let check = if failing.is_empty() {
        CheckReport::pass(
            "instances of the existence theorems",
            others.len(),
            "every explicit instance is exercised by criteria 1-6",
        )
    } else {
        CheckReport::fail(
            "instances of the existence theorems",
            others.len(),
            format!("criteria {} failed", failing.join(", ")),
        )
    };
    Criterion {
        id: 7,
        title: CRITERIA[6].1,
        budget: Duration::from_secs(CRITERIA[6].2),
        elapsed: start.elapsed(),
        checks: vec![check],
    }
}

// ---------------------------------------------------------------------------
// Criterion 1: the golden table

fn atom(text: &str) -> PolyAtom {
    let p = Poly::parse(text, &trace_vars()).expect("reference polynomial");
    PolyAtom::new(&p).expect("non-constant")
}

fn cell(eqs: &[&str]) -> Formula<PolyAtom> {
    Formula::all(eqs.iter().map(|e| Formula::Leaf(atom(e))))
}

const DISCRIMINANT: &str = "z^2 - x*y*z + x^2 + y^2 - 4";

/// The tabulated jump loci, written out by hand independently of
/// `stratify`.
pub fn reference_locus(k: usize) -> PolyConstructibleSet {
    let parabolic = [cell(&["x - 2", "y - z"]), cell(&["y - 2", "x - z"])];
    let formula = match k {
        0 | 1 => Formula::True,
        2 => Formula::any([cell(&[DISCRIMINANT]), cell(&["x - 2"]), cell(&["y - 2"])]),
        3 => Formula::any(parabolic.into_iter().chain([cell(&["x - 2", "y - 2"])])),
        4 => Formula::any(parabolic),
        5 | 6 => cell(&["x - 2", "y - 2", "z - 2"]),
        _ => Formula::False,
    };
    PolyConstructibleSet::new(trace_vars(), formula)
}

/// The atoms whose sign patterns the structured sample must separate.
pub fn pattern_atoms() -> Vec<PolyAtom> {
    ["x - 2", "y - 2", "z - 2", "y - z", "x - z", DISCRIMINANT]
        .iter()
        .map(|t| atom(t))
        .collect()
}

fn scalar(num: i64, den: i64) -> Scalar {
    Scalar::ratio(num, den)
}

fn trace_of(l: &Scalar) -> Scalar {
    l + &l.inv()
}

/// Grid points, reducible families and random rational points in trace
/// coordinates.
pub fn structured_sample() -> Vec<SamplePoint> {
    let mut out = Vec::new();
    for x in -2..=4 {
        for y in -2..=4 {
            for z in -2..=4 {
                out.push(SamplePoint {
                    label: "grid".into(),
                    coords: TracePoint::from_ints(x, y, z).coords(),
                });
            }
        }
    }
    let half = BigRational::new(1.into(), 2.into());
    let phi_plus = Scalar::new(BigRational::from_integer(3.into()) * &half, half.clone(), 5.into());
    let units = [
        scalar(1, 1),
        scalar(-1, 1),
        scalar(2, 1),
        scalar(1, 2),
        scalar(-2, 1),
        scalar(3, 1),
        phi_plus.clone(),
        phi_plus.inv(),
    ];
    for l in &units {
        for m in &units {
            let lm = l * m;
            out.push(SamplePoint {
                label: format!("reducible λ={l} μ={m}"),
                coords: TracePoint::new(trace_of(l), trace_of(m), trace_of(&lm)).coords(),
            });
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for _ in 0..200 {
        let coords = (0..3).map(|_| Scalar::from_rational(random_rational(&mut rng, 10))).collect();
        out.push(SamplePoint {
            label: "random".into(),
            coords,
        });
    }
    out
}

/// Result of the bounded equality procedure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BoundedEquality {
    /// Equal: every sign pattern of the atoms is witnessed by a sample point
    /// on which the sets agree, or is proven infeasible.
    Equal { witnessed: usize, infeasible: usize },
    /// A sample point in exactly one set.
    Witness(SamplePoint),
    /// Agreement on the sample but a feasible-looking pattern has no point.
    Inconclusive(String),
}

/// Both sets are Boolean combinations of atoms, so membership depends only on
/// the vanishing pattern of those atoms. Agreement on a sample that hits every
/// feasible pattern therefore proves equality.
pub fn bounded_equal(
    candidate: &PolyConstructibleSet,
    reference: &PolyConstructibleSet,
    sample: &[SamplePoint],
) -> BoundedEquality {
    match equivalent_on(candidate, reference, sample) {
        Ok(Equivalence::Witness(p)) => return BoundedEquality::Witness(p),
        Ok(Equivalence::Agree) => {}
        Err(e) => return BoundedEquality::Inconclusive(e.to_string()),
    }
    let mut atoms = pattern_atoms();
    for a in candidate.atoms().into_iter().chain(reference.atoms()) {
        if !atoms.contains(&a) {
            atoms.push(a);
        }
    }
    if atoms.len() > 12 {
        return BoundedEquality::Inconclusive(format!("{} atoms is too many to enumerate", atoms.len()));
    }
    let seen: BTreeSet<u32> = sample
        .iter()
        .map(|p| {
            let coords: Vec<RadicalSum> = p.coords.iter().map(Scalar::to_radical).collect();
            pattern_of(&atoms, &coords)
        })
        .collect();
    let (mut witnessed, mut infeasible) = (0, 0);
    for mask in 0..(1u32 << atoms.len()) {
        if seen.contains(&mask) {
            witnessed += 1;
        } else if pattern_infeasible(&atoms, mask) {
            infeasible += 1;
        } else {
            let vars = trace_vars();
            let zero: Vec<String> = (0..atoms.len())
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| atoms[i].equation(&vars))
                .collect();
            return BoundedEquality::Inconclusive(format!(
                "no sample point where exactly {{{}}} vanish",
                zero.join(", ")
            ));
        }
    }
    BoundedEquality::Equal { witnessed, infeasible }
}

fn pattern_of(atoms: &[PolyAtom], coords: &[RadicalSum]) -> u32 {
    atoms
        .iter()
        .enumerate()
        .filter(|(_, a)| a.vanishes_at(coords))
        .fold(0, |m, (i, _)| m | 1 << i)
}

/// Proves that no point has exactly the atoms in `mask` vanishing: either the
/// vanishing conditions are inconsistent, or they imply one of the others.
fn pattern_infeasible(atoms: &[PolyAtom], mask: u32) -> bool {
    let zero: Vec<PolyAtom> = (0..atoms.len())
        .filter(|i| mask >> i & 1 == 1)
        .map(|i| atoms[i].clone())
        .collect();
    let Some(base) = simplify_conjunction(&zero) else {
        return true;
    };
    let base_set: BTreeSet<String> = atom_keys(&base);
    (0..atoms.len()).filter(|i| mask >> i & 1 == 0).any(|i| {
        let mut more = base.clone();
        more.push(atoms[i].clone());
        match simplify_conjunction(&more) {
            None => false,
            Some(s) => atom_keys(&s) == base_set,
        }
    })
}

fn atom_keys(atoms: &[PolyAtom]) -> BTreeSet<String> {
    let vars = trace_vars();
    atoms.iter().map(|a| a.poly().display(&vars)).collect()
}

/// The recorded implication: on `x = 2` the discriminant is `(z - y)^2`.
pub fn parabolic_implication() -> CheckReport {
    let name = "Δ=0 ∧ x=2 implies y=z";
    let vars = trace_vars();
    let restricted = discriminant_poly().substitute(0, &Poly::from_int(3, 2));
    let square = Poly::parse("(z - y)^2", &vars).expect("literal");
    if restricted != square {
        return CheckReport::fail(name, 1, format!("Δ(2,y,z) = {}", restricted.display(&vars)));
    }
    match simplify_conjunction(&[atom("x - 2"), atom(DISCRIMINANT)]) {
        Some(s) if atom_keys(&s) == atom_keys(&[atom("x - 2"), atom("y - z")]) => {
            CheckReport::pass(name, 1, "Δ(2,y,z) = (z-y)^2")
        }
        other => CheckReport::fail(name, 1, format!("simplified to {other:?}")),
    }
}

/// Criterion 1 against an arbitrary stratification, so that deliberately
/// broken ones can be shown to fail.
pub fn golden_table_with(strat: &dyn Fn(usize) -> PolyConstructibleSet) -> Vec<CheckReport> {
    let sample = structured_sample();
    let mut out = Vec::new();
    for k in (2..=7).rev() {
        let name = format!("ℓ≥{k}");
        let got = strat(k);
        let want = reference_locus(k);
        let report = match bounded_equal(&got, &want, &sample) {
            BoundedEquality::Equal { witnessed, infeasible } => CheckReport::pass(
                name,
                sample.len(),
                format!(
                    "{} = {} ({witnessed} patterns witnessed, {infeasible} infeasible)",
                    got.notation(),
                    want.notation()
                ),
            ),
            BoundedEquality::Witness(p) => {
                let t = TracePoint::new(p.coords[0].clone(), p.coords[1].clone(), p.coords[2].clone());
                CheckReport::fail(
                    name,
                    sample.len(),
                    format!(
                        "witness {t} ({}, {}): computed {} vs table {}",
                        p.label,
                        if is_reducible_point(&t) { "reducible" } else { "irreducible" },
                        got.member(&p.coords).unwrap_or(false),
                        want.member(&p.coords).unwrap_or(false)
                    ),
                )
            }
            BoundedEquality::Inconclusive(why) => CheckReport::fail(name, sample.len(), why),
        };
        out.push(report);
    }
    out.push(parabolic_implication());
    out
}

/// Deliberate defects used to show the table check has teeth.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fault {
    /// `z^2 + xyz + x^2 + y^2 - 4` in place of the discriminant.
    FlippedDiscriminantSign,
    /// Treats `Δ = 0 ∧ x = 2` as inconsistent instead of as `y = z`.
    MissingParabolicImplication,
}

pub fn faulty_stratify(fault: Fault, k: usize) -> PolyConstructibleSet {
    let good = stratify(k);
    let disc = atom(DISCRIMINANT);
    let flipped = atom("z^2 + x*y*z + x^2 + y^2 - 4");
    let (yz, xz) = (atom("y - z"), atom("x - z"));
    let formula = good.formula().map_leaves(&mut |a: &PolyAtom| match fault {
        Fault::FlippedDiscriminantSign if *a == disc => Formula::Leaf(flipped.clone()),
        Fault::MissingParabolicImplication if *a == yz || *a == xz => Formula::False,
        _ => Formula::Leaf(a.clone()),
    });
    PolyConstructibleSet::new(trace_vars(), formula)
}

// ---------------------------------------------------------------------------
// Random representations

fn random_rational(rng: &mut ChaCha8Rng, height: i64) -> BigRational {
    BigRational::new(rng.gen_range(-height..=height).into(), rng.gen_range(1..=height).into())
}

fn random_nonzero(rng: &mut ChaCha8Rng, height: i64) -> BigRational {
    loop {
        let q = random_rational(rng, height);
        if !q.is_zero() {
            return q;
        }
    }
}

/// A random element of SL2(Q) with `a, b, c` of height at most `height`.
fn random_sl2(rng: &mut ChaCha8Rng, height: i64) -> Mat2 {
    let a = random_nonzero(rng, height);
    let b = random_rational(rng, height);
    let c = random_rational(rng, height);
    let d = (BigRational::one() + &b * &c) / &a;
    Mat2::new(a.into(), b.into(), c.into(), d.into()).expect("rational entries")
}

/// A product of elementary matrices with small integer entries.
fn random_conjugator(rng: &mut ChaCha8Rng) -> Mat2 {
    let s = rng.gen_range(-3..=3);
    let t = rng.gen_range(-3..=3);
    Mat2::from_ints([[1, s], [0, 1]])
        .mul(&Mat2::from_ints([[1, 0], [t, 1]]))
        .expect("rational")
}

fn conjugate(p: &Mat2, m: &Mat2) -> Result<Mat2, AlgebraError> {
    p.mul(m)?.mul(&p.inverse()?)
}

/// Eigenvalue choices over one quadratic field at a time.
fn unit_family(rng: &mut ChaCha8Rng) -> Vec<Scalar> {
    let rational = vec![scalar(1, 1), scalar(-1, 1), scalar(2, 1), scalar(1, 2), scalar(-3, 1), scalar(1, 3)];
    let half = BigRational::new(1.into(), 2.into());
    let three_halves = BigRational::new(3.into(), 2.into());
    let extra = match rng.gen_range(0..5) {
        0 => vec![],
        1 => vec![
            Scalar::new(three_halves.clone(), half.clone(), 5.into()),
            Scalar::new(half.clone(), half.clone(), 5.into()),
        ],
        2 => vec![Scalar::new(BigRational::one(), BigRational::one(), 2.into())],
        3 => vec![Scalar::new(BigRational::zero(), BigRational::one(), (-1).into())],
        _ => vec![
            Scalar::new(-half.clone(), half.clone(), (-3).into()),
            Scalar::new(half.clone(), half.clone(), (-3).into()),
        ],
    };
    rational.into_iter().chain(extra).collect()
}

fn pick(rng: &mut ChaCha8Rng, items: &[Scalar]) -> Scalar {
    let s = items[rng.gen_range(0..items.len())].clone();
    if rng.gen_bool(0.5) {
        s
    } else {
        s.inv()
    }
}

/// Semisimple reducible pair: simultaneous diagonal, optionally conjugated.
fn random_split_pair(rng: &mut ChaCha8Rng) -> Vec<Mat2> {
    let units = unit_family(rng);
    let (l, m) = (pick(rng, &units), pick(rng, &units));
    let a = Mat2::diag(l.clone(), l.inv()).expect("one field");
    let b = Mat2::diag(m.clone(), m.inv()).expect("one field");
    if rng.gen_bool(0.5) {
        let p = random_conjugator(rng);
        vec![conjugate(&p, &a).expect("one field"), conjugate(&p, &b).expect("one field")]
    } else {
        vec![a, b]
    }
}

/// Upper triangular pair with a random extension class, conjugated.
fn random_triangular_pair(rng: &mut ChaCha8Rng, n: usize) -> Vec<Mat2> {
    let units = [scalar(1, 1), scalar(-1, 1), scalar(2, 1), scalar(1, 2), scalar(3, 1), scalar(-1, 2)];
    let p = random_conjugator(rng);
    (0..n)
        .map(|_| {
            let l = units[rng.gen_range(0..units.len())].clone();
            let s = if rng.gen_bool(0.7) {
                Scalar::from_rational(random_rational(rng, 5))
            } else {
                Scalar::zero()
            };
            let t = Mat2::new(l.clone(), s, Scalar::zero(), l.inv()).expect("rational");
            conjugate(&p, &t).expect("rational")
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Criterion 2

/// `length_from_traces(trace_coords(L)) = ℓ(Rj_*(L[1]))` on semisimple
/// two-puncture SL2 systems.
pub fn consistency(count: usize) -> CheckReport {
    let name = "length_from_traces agrees with pushforward_length";
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 2);
    let mut checked = 0;
    let mut attempts = 0;
    while checked < count {
        attempts += 1;
        if attempts > 20 * count {
            return CheckReport::fail(name, checked, "could not generate enough semisimple samples");
        }
        let mats = if checked % 10 < 7 {
            vec![random_sl2(&mut rng, 10), random_sl2(&mut rng, 10)]
        } else {
            random_split_pair(&mut rng)
        };
        let Ok(rep) = Representation::sl2(mats) else { continue };
        match is_semisimple(&rep) {
            Ok(true) => {}
            _ => continue,
        }
        let t = match trace_coords(&rep) {
            Ok(t) => t,
            Err(e) => return CheckReport::fail(name, checked, format!("trace_coords: {e}")),
        };
        let direct = match pushforward_length(&rep, Pushforward::Star) {
            Ok(v) => v,
            Err(e) => return CheckReport::fail(name, checked, format!("pushforward_length at {t}: {e}")),
        };
        let closed = length_from_traces(&t);
        if closed != direct {
            return CheckReport::fail(
                name,
                checked,
                format!("traces {t}: closed form {closed}, pushforward {direct}\n{}", rep.to_file_string()),
            );
        }
        checked += 1;
    }
    CheckReport::pass(name, checked, "all agree")
}

// ---------------------------------------------------------------------------
// Criterion 3

fn random_mixed_rep(rng: &mut ChaCha8Rng, i: usize) -> Option<Representation> {
    let n = if i.is_multiple_of(4) { rng.gen_range(1..=3) } else { 2 };
    let mats = match i % 3 {
        0 => (0..n).map(|_| random_sl2(rng, 10)).collect(),
        1 => random_triangular_pair(rng, n),
        _ => {
            let mut m = random_split_pair(rng);
            m.truncate(n);
            m
        }
    };
    if i % 5 == 4 {
        // scale the first generator to leave SL2
        let c = Scalar::from_int(rng.gen_range(2..=3));
        let a = &mats[0];
        let scaled = Mat2::new(
            &c * a.entry(0, 0),
            &c * a.entry(0, 1),
            &c * a.entry(1, 0),
            &c * a.entry(1, 1),
        )
        .ok()?;
        let mut rest = vec![scaled];
        rest.extend(mats.into_iter().skip(1));
        return Representation::gl2(rest).ok();
    }
    Representation::sl2(mats).ok()
}

/// `ℓ(Rj_*) = ℓ(Rj_!)`, invariance under semisimplification, additivity over
/// composition factors and the value range on two-puncture SL2 systems.
pub fn identities(count: usize) -> Vec<CheckReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 3);
    let names = [
        "(a) ℓ(Rj_*) = ℓ(Rj_!)",
        "(b) ℓ(Rj_*L) = ℓ(Rj_*L^ss)",
        "(c) additivity over composition factors",
        "(d) values in {1,2,3,4,6} for n=2 SL2",
    ];
    let mut failures: [Option<String>; 4] = Default::default();
    let mut non_semisimple = 0;
    let mut done = 0;
    let mut i = 0;
    while done < count {
        i += 1;
        if i > 20 * count {
            break;
        }
        let Some(rep) = random_mixed_rep(&mut rng, i) else { continue };
        let run = || -> Result<[Result<(), String>; 4], String> {
            let star = pushforward_length(&rep, Pushforward::Star).map_err(|e| e.to_string())?;
            let shriek = pushforward_length(&rep, Pushforward::Shriek).map_err(|e| e.to_string())?;
            let ss = semisimplify(&rep).map_err(|e| e.to_string())?;
            let star_ss = pushforward_length(&ss, Pushforward::Star).map_err(|e| e.to_string())?;
            let mut sum = 0;
            for f in composition_factors(&rep).map_err(|e| e.to_string())? {
                sum += pushforward_length(&f.to_representation(false), Pushforward::Star).map_err(|e| e.to_string())?;
            }
            let ctx = |what: &str, a: usize, b: usize| {
                if a == b {
                    Ok(())
                } else {
                    Err(format!("{what}: {a} vs {b} for\n{}", rep.to_file_string()))
                }
            };
            let range = if rep.is_sl2() && rep.rank() == 2 && rep.n_punctures() == 2 && ![1, 2, 3, 4, 6].contains(&star) {
                Err(format!("length {star} for\n{}", rep.to_file_string()))
            } else {
                Ok(())
            };
            Ok([
                ctx("star vs shriek", star, shriek),
                ctx("L vs L^ss", star, star_ss),
                ctx("total vs factor sum", star, sum),
                range,
            ])
        };
        match run() {
            Ok(results) => {
                for (slot, r) in failures.iter_mut().zip(results) {
                    if let (None, Err(e)) = (&slot, r) {
                        *slot = Some(e);
                    }
                }
            }
            Err(e) => {
                for slot in failures.iter_mut() {
                    slot.get_or_insert_with(|| e.clone());
                }
            }
        }
        if !is_semisimple(&rep).unwrap_or(true) {
            non_semisimple += 1;
        }
        done += 1;
    }
    let mut out: Vec<CheckReport> = names
        .iter()
        .zip(failures)
        .map(|(name, f)| match f {
            None => CheckReport::pass(*name, done, format!("{non_semisimple} non-semisimple")),
            Some(e) => CheckReport::fail(*name, done, e),
        })
        .collect();
    if done < count {
        out.push(CheckReport::fail("sample size", done, format!("only {done} of {count} generated")));
    }
    out
}

// ---------------------------------------------------------------------------
// Criterion 4

/// Eigenvectors of a non-scalar rational matrix over its splitting field,
/// written down from the entries directly.
fn brute_eigenvectors(m: &Mat2) -> Vec<(Scalar, Vec2)> {
    let [[a, b], [c, d]] = m.rows().clone();
    let tr = m.trace();
    let disc = (&tr * &tr - Scalar::from_int(4) * m.det())
        .as_rational()
        .cloned()
        .expect("rational matrix");
    let root = Scalar::sqrt_rational(&disc);
    let two = Scalar::from_int(2);
    let mut out = Vec::new();
    for sign in [1, -1] {
        let l = (&tr + &(&root * &Scalar::from_int(sign))).checked_div(&two).expect("two is invertible");
        let v = if !b.is_zero() {
            Vec2::new(b.clone(), &l - &a)
        } else if !c.is_zero() {
            Vec2::new(&l - &d, c.clone())
        } else if l == a {
            Vec2::new(Scalar::one(), Scalar::zero())
        } else {
            Vec2::new(Scalar::zero(), Scalar::one())
        };
        out.push((l, v));
    }
    out
}

fn preserves(m: &Mat2, v: &Vec2) -> Option<Scalar> {
    let [[a, b], [c, d]] = m.rows().clone();
    let (v0, v1) = (&v.0[0], &v.0[1]);
    let w0 = &(&a * v0) + &(&b * v1);
    let w1 = &(&c * v0) + &(&d * v1);
    if !(&(v0 * &w1) - &(v1 * &w0)).is_zero() {
        return None;
    }
    Some(if !v0.is_zero() { &w0 * &v0.inv() } else { &w1 * &v1.inv() })
}

fn random_oracle_pair(rng: &mut ChaCha8Rng, i: usize) -> Vec<Mat2> {
    match i % 4 {
        0 => vec![random_sl2(rng, 10), random_sl2(rng, 10)],
        1 => random_triangular_pair(rng, 2),
        2 => {
            // commuting pair sharing possibly irrational eigenlines
            let a = random_sl2(rng, 4);
            let b = match rng.gen_range(0..3) {
                0 => a.mul(&a).expect("rational"),
                1 => a.inverse().expect("invertible"),
                _ => Mat2::new(-a.entry(0, 0), -a.entry(0, 1), -a.entry(1, 0), -a.entry(1, 1)).expect("rational"),
            };
            vec![a, b]
        }
        _ => {
            let mut m = random_triangular_pair(rng, 2);
            let p = random_sl2(rng, 3);
            for x in m.iter_mut() {
                *x = conjugate(&p, x).expect("rational");
            }
            if rng.gen_bool(0.3) {
                m[1] = Mat2::identity();
            }
            m
        }
    }
}

/// `composition_factors` against a direct common-eigenline search over the
/// splitting field and the commutator criterion `det(AB - BA) = 0`.
pub fn composition_oracle(count: usize) -> CheckReport {
    let name = "composition_factors matches eigenline enumeration";
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 4);
    let mut reducible = 0;
    for i in 0..count {
        let mats = random_oracle_pair(&mut rng, i);
        let (a, b) = (&mats[0], &mats[1]);
        let rep = match Representation::sl2(mats.clone()) {
            Ok(r) => r,
            Err(e) => return CheckReport::fail(name, i, format!("generated an invalid pair: {e}")),
        };
        let mut lines: Vec<(Scalar, Scalar)> = Vec::new();
        match (a.is_scalar_matrix(), b.is_scalar_matrix()) {
            (true, true) => lines.push((a.entry(0, 0).clone(), b.entry(0, 0).clone())),
            (false, _) => {
                for (l, v) in brute_eigenvectors(a) {
                    if let Some(m) = preserves(b, &v) {
                        lines.push((l, m));
                    }
                }
            }
            (true, false) => {
                for (m, _) in brute_eigenvectors(b) {
                    lines.push((a.entry(0, 0).clone(), m));
                }
            }
        }
        let commutator = a.mul(b).and_then(|ab| ab.sub(&b.mul(a)?)).map(|c| c.det().is_zero());
        let factors = match composition_factors(&rep) {
            Ok(f) => f,
            Err(e) => return CheckReport::fail(name, i, format!("composition_factors: {e}\n{}", rep.to_file_string())),
        };
        let split = factors.len() == 2;
        if split != !lines.is_empty() || commutator != Ok(split) {
            return CheckReport::fail(
                name,
                i,
                format!(
                    "{} factors, {} brute-force lines, commutator criterion {commutator:?}\n{}",
                    factors.len(),
                    lines.len(),
                    rep.to_file_string()
                ),
            );
        }
        if split {
            reducible += 1;
            let sub = match &factors[0].monodromies {
                crate::local_system::Monodromies::Rank1(v) => v.clone(),
                _ => unreachable!("factors of a split rank 2 system have rank 1"),
            };
            if !lines.iter().any(|(l, m)| *l == sub[0] && *m == sub[1]) {
                return CheckReport::fail(
                    name,
                    i,
                    format!("sub character ({}, {}) is not on a common eigenline", sub[0], sub[1]),
                );
            }
        }
    }
    // the eigenvalue-1 count is read off the same matrices; keep it honest too
    let unipotent = Mat2::from_ints([[1, 1], [0, 1]]);
    if eig1_multiplicity(&unipotent) != 1 || eig1_multiplicity(&Mat2::identity()) != 2 {
        return CheckReport::fail(name, count, "eig1_multiplicity on Jordan blocks");
    }
    CheckReport::pass(name, count, format!("{reducible} reducible, {} irreducible", count - reducible))
}

// ---------------------------------------------------------------------------
// Criterion 5

fn random_coset(rng: &mut ChaCha8Rng, b: usize) -> TorsionCoset {
    let rows = rng.gen_range(1..=2);
    let denominators = [1i64, 2, 3, 4, 6, 12];
    let eqs: Vec<Vec<i64>> = (0..rows).map(|_| (0..b).map(|_| rng.gen_range(-3..=3)).collect()).collect();
    let rhs: Vec<(i64, i64)> = (0..rows)
        .map(|_| {
            let q = denominators[rng.gen_range(0..denominators.len())];
            (rng.gen_range(0..q), q)
        })
        .collect();
    TorsionCoset::from_ints(b, &eqs, &rhs).expect("well-formed")
}

/// `intersect_cosets` against enumeration of every point of order dividing 12.
pub fn torus_intersections(count: usize) -> CheckReport {
    let name = "intersect_cosets matches torsion enumeration";
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 5);
    let grids: Vec<Vec<TorsionPoint>> = (1..=3).map(|b| TorsionPoint::all_of_order_dividing(b, 12)).collect();
    let mut points = 0;
    let mut nonempty = 0;
    for i in 0..count {
        let b = 1 + i % 3;
        let (c1, c2) = (random_coset(&mut rng, b), random_coset(&mut rng, b));
        let parts = match intersect_cosets(&c1, &c2) {
            Ok(p) => p,
            Err(e) => return CheckReport::fail(name, i, format!("{c1} ∩ {c2}: {e}")),
        };
        if !parts.is_empty() {
            nonempty += 1;
        }
        for p in &grids[b - 1] {
            let lhs = c1.contains(p).expect("rank") && c2.contains(p).expect("rank");
            let rhs = parts.iter().any(|c| c.contains(p).expect("rank"));
            if lhs != rhs {
                return CheckReport::fail(name, i, format!("{c1} ∩ {c2} at {p}: expected {lhs}, components say {rhs}"));
            }
            points += 1;
        }
    }
    CheckReport::pass(name, count, format!("{nonempty} nonempty, {points} point checks"))
}

fn random_int_matrix(rng: &mut ChaCha8Rng) -> IntMatrix {
    let (r, c) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
    let rows: Vec<Vec<i64>> = (0..r).map(|_| (0..c).map(|_| rng.gen_range(-9..=9)).collect()).collect();
    IntMatrix::from_rows(c, &rows)
}

/// `U·M·V = D`, unimodularity and the divisibility chain on random matrices.
pub fn snf_random(count: usize) -> CheckReport {
    let name = "Smith normal form on random matrices";
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 6);
    let one = BigInt::one();
    for i in 0..count {
        let m = random_int_matrix(&mut rng);
        let s = smith_normal_form(&m);
        let problem = if s.u.mul(&m).mul(&s.v) != s.d {
            Some("U·M·V ≠ D")
        } else if s.u.det() != one && s.u.det() != -&one {
            Some("|det U| ≠ 1")
        } else if s.v.det() != one && s.v.det() != -&one {
            Some("|det V| ≠ 1")
        } else if (0..s.d.nrows()).any(|r| (0..s.d.ncols()).any(|c| r != c && !s.d[(r, c)].is_zero())) {
            Some("D not diagonal")
        } else {
            let d = s.diagonal();
            let chain = d.windows(2).all(|w| {
                if w[0].is_zero() {
                    w[1].is_zero()
                } else {
                    (&w[1] % &w[0]).is_zero()
                }
            });
            (!chain || d.iter().any(Signed::is_negative)).then_some("diagonal is not a divisibility chain")
        };
        if let Some(p) = problem {
            return CheckReport::fail(name, i, format!("{p} for {m:?}"));
        }
    }
    CheckReport::pass(name, count, "all verified")
}

/// `coset_normalize` reports dimension `b - rank(E)`, with the rank taken from
/// the Hermite form.
pub fn normalize_dimensions(count: usize) -> CheckReport {
    let name = "normalize dimension = b - rank(E)";
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 7);
    let mut nonempty = 0;
    for i in 0..count {
        let b = rng.gen_range(1..=3);
        let c = random_coset(&mut rng, b);
        let e = IntMatrix::from_rows(b, c.equations());
        let (_, h) = hermite_normal_form(&e);
        let rank = (0..h.nrows()).filter(|&r| h.row(r).iter().any(|x| !x.is_zero())).count();
        if let Normalized::Coset { dimension, .. } = c.normalize() {
            nonempty += 1;
            if dimension != b - rank {
                return CheckReport::fail(name, i, format!("{c}: dimension {dimension}, b - rank = {}", b - rank));
            }
        }
    }
    CheckReport::pass(name, count, format!("{nonempty} nonempty"))
}

// ---------------------------------------------------------------------------
// Criterion 6

/// The exact-length partition of the torsion points and its agreement with
/// `pushforward_length` wherever the point is a quadratic character.
pub fn rank1_loci(max_n: usize) -> Vec<CheckReport> {
    let mut out = Vec::new();
    for n in 1..=max_n {
        let name = format!("rank-1 loci n={n}");
        let loci: Vec<_> = (1..=n + 1).map(|k| rank1_jump_locus(n, k).expect("n ≥ 1")).collect();
        let mut crossed = 0;
        let mut failure = None;
        let points = TorsionPoint::all_of_order_dividing(n, 12);
        for p in &points {
            let hits: Vec<usize> = (1..=n + 1)
                .filter(|&k| member_torsion(&loci[k - 1], p).expect("rank"))
                .collect();
            let expect = 1 + p.trivial_coordinates();
            if hits != [expect] {
                failure = Some(format!("{p}: in loci {hits:?}, expected only {expect}"));
                break;
            }
            let Ok(values) = p.to_scalars() else { continue };
            let Ok(rep) = Representation::rank1(values) else { continue };
            match pushforward_length(&rep, Pushforward::Star) {
                Ok(len) if len == expect => crossed += 1,
                other => {
                    failure = Some(format!("{p}: pushforward_length {other:?}, locus says {expect}"));
                    break;
                }
            }
        }
        out.push(match failure {
            None => CheckReport::pass(name, points.len(), format!("{crossed} cross-checked against pushforward_length")),
            Some(f) => CheckReport::fail(name, points.len(), f),
        });
    }
    out
}
