//! Torsion-translated subtori of the rank-1 character torus `(C*)^b` and
//! their Boolean calculus.

mod coset;
mod lattice;

use num_bigint::BigInt;
use thiserror::Error;

pub use coset::{
    frac, intersect_cosets, member_torsion, rank1_jump_locus, Normalized, TorsionCoset, TorsionPoint, TorusFormula,
    MAX_COMPONENTS, TORUS_HEADER,
};
pub use lattice::{hermite_normal_form, smith_normal_form, IntMatrix, Snf};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TorusError {
    #[error("ambient ranks differ: {left} vs {right}")]
    RankMismatch { left: usize, right: usize },
    #[error("malformed coset: {0}")]
    Shape(String),
    #[error("splitting needs {0} components, above the limit of {MAX_COMPONENTS}")]
    DivisorProductTooLarge(BigInt),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("not representable: {0}")]
    Unrepresentable(String),
}
