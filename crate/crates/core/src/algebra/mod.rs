//! Exact arithmetic over `Q` and single quadratic extensions, plus the 2x2
//! matrix routines the local-system code needs.

mod matrix;
mod radical;
mod scalar;

use num_bigint::BigInt;
use thiserror::Error;

pub use matrix::{char_roots, common_eigenline, common_eigenvector, eig1_multiplicity, Mat2, Vec2};
pub use radical::RadicalSum;
pub use scalar::{rational_sqrt, squarefree_decompose, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("cannot combine Q(sqrt({left})) with Q(sqrt({right}))")]
    FieldMismatch { left: BigInt, right: BigInt },
    #[error("division by zero")]
    DivisionByZero,
    #[error("needs more than one quadratic extension: {0}")]
    FieldTower(String),
    #[error("invalid scalar {0:?}")]
    Parse(String),
    #[error("{0}")]
    Precondition(String),
}
