//! Exact lengths of perverse pushforwards of rank ≤ 2 local systems on
//! punctured affine lines, the jump-locus stratification of the SL₂
//! character variety of the free group on two generators, and the Boolean
//! calculus of torsion-translated subtori of rank-1 character tori.

pub mod algebra;
pub mod constructible;
pub mod formula;
pub mod local_system;
pub mod poly;
pub mod torus;
pub mod trace;
pub mod verify;

pub use algebra::{AlgebraError, Mat2, RadicalSum, Scalar, Vec2};
pub use constructible::{PolyAtom, PolyConstructibleSet, Sample, SamplePoint};
pub use formula::{Formula, FormulaError};
pub use local_system::{
    composition_factors, ic_length, is_semisimple, local_system_length, puncture_h1, pushforward_length,
    semisimplify, CompositionFactor, LocalSystemError, Monodromies, Pushforward, Representation,
};
pub use poly::Poly;
pub use torus::{
    intersect_cosets, member_torsion, rank1_jump_locus, smith_normal_form, TorsionCoset, TorsionPoint, TorusError,
    TorusFormula,
};
pub use trace::{
    discriminant, exact_length_locus, length_from_traces, rep_from_traces, stratify, trace_coords, TraceError,
    TracePoint,
};
