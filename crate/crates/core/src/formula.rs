//! Boolean formula trees over an arbitrary leaf type, with the light
//! simplification applied at construction: constant folding, flattening,
//! double-negation elimination and removal of syntactically equal siblings.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormulaError {
    #[error("variable contexts differ: {left:?} vs {right:?}")]
    ContextMismatch { left: Vec<String>, right: Vec<String> },
    #[error("point has {got} coordinates, expected {expected}")]
    Dimension { expected: usize, got: usize },
    #[error("unknown variable {0:?}")]
    UnknownVariable(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("line {line}: {msg}")]
    Line { line: usize, msg: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula<L> {
    True,
    False,
    Leaf(L),
    Not(Box<Formula<L>>),
    And(Vec<Formula<L>>),
    Or(Vec<Formula<L>>),
}

impl<L: Clone + PartialEq> Formula<L> {
    pub fn leaf(l: L) -> Self {
        Formula::Leaf(l)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> Self {
        match self {
            Formula::True => Formula::False,
            Formula::False => Formula::True,
            Formula::Not(inner) => *inner,
            f => Formula::Not(Box::new(f)),
        }
    }

    pub fn and(self, other: Self) -> Self {
        Self::all([self, other])
    }

    pub fn or(self, other: Self) -> Self {
        Self::any([self, other])
    }

    pub fn all(items: impl IntoIterator<Item = Self>) -> Self {
        let mut kids: Vec<Self> = Vec::new();
        for f in items {
            match f {
                Formula::True => {}
                Formula::False => return Formula::False,
                Formula::And(inner) => {
                    for g in inner {
                        push_unique(&mut kids, g);
                    }
                }
                g => push_unique(&mut kids, g),
            }
        }
        match kids.len() {
            0 => Formula::True,
            1 => kids.pop().unwrap(),
            _ => Formula::And(kids),
        }
    }

    pub fn any(items: impl IntoIterator<Item = Self>) -> Self {
        let mut kids: Vec<Self> = Vec::new();
        for f in items {
            match f {
                Formula::False => {}
                Formula::True => return Formula::True,
                Formula::Or(inner) => {
                    for g in inner {
                        push_unique(&mut kids, g);
                    }
                }
                g => push_unique(&mut kids, g),
            }
        }
        match kids.len() {
            0 => Formula::False,
            1 => kids.pop().unwrap(),
            _ => Formula::Or(kids),
        }
    }

    /// Folds the tree, asking `leaf` for the truth value of each leaf.
    pub fn eval(&self, leaf: &mut impl FnMut(&L) -> bool) -> bool {
        match self {
            Formula::True => true,
            Formula::False => false,
            Formula::Leaf(l) => leaf(l),
            Formula::Not(f) => !f.eval(leaf),
            Formula::And(fs) => fs.iter().all(|f| f.eval(leaf)),
            Formula::Or(fs) => fs.iter().any(|f| f.eval(leaf)),
        }
    }

    pub fn leaves(&self) -> Vec<&L> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves<'a>(&'a self, out: &mut Vec<&'a L>) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Leaf(l) => out.push(l),
            Formula::Not(f) => f.collect_leaves(out),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().for_each(|f| f.collect_leaves(out)),
        }
    }

    /// Rebuilds the tree through the simplifying constructors with each leaf
    /// replaced by a subformula.
    pub fn map_leaves<M: Clone + PartialEq>(&self, f: &mut impl FnMut(&L) -> Formula<M>) -> Formula<M> {
        match self {
            Formula::True => Formula::True,
            Formula::False => Formula::False,
            Formula::Leaf(l) => f(l),
            Formula::Not(g) => g.map_leaves(f).not(),
            Formula::And(gs) => Formula::all(gs.iter().map(|g| g.map_leaves(f)).collect::<Vec<_>>()),
            Formula::Or(gs) => Formula::any(gs.iter().map(|g| g.map_leaves(f)).collect::<Vec<_>>()),
        }
    }

    /// Pushes negations down to the leaves (De Morgan).
    pub fn negation_normal_form(&self) -> Self {
        match self {
            Formula::Not(inner) => match inner.as_ref() {
                Formula::True => Formula::False,
                Formula::False => Formula::True,
                Formula::Leaf(l) => Formula::Not(Box::new(Formula::Leaf(l.clone()))),
                Formula::Not(g) => g.negation_normal_form(),
                Formula::And(gs) => {
                    Formula::any(gs.iter().map(|g| g.clone().not().negation_normal_form()).collect::<Vec<_>>())
                }
                Formula::Or(gs) => {
                    Formula::all(gs.iter().map(|g| g.clone().not().negation_normal_form()).collect::<Vec<_>>())
                }
            },
            Formula::And(gs) => Formula::all(gs.iter().map(Self::negation_normal_form).collect::<Vec<_>>()),
            Formula::Or(gs) => Formula::any(gs.iter().map(Self::negation_normal_form).collect::<Vec<_>>()),
            f => f.clone(),
        }
    }
}

fn push_unique<L: PartialEq>(kids: &mut Vec<Formula<L>>, f: Formula<L>) {
    if !kids.contains(&f) {
        kids.push(f);
    }
}
