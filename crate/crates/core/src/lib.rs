//! Exact rearrangement-invariant analysis of composition operators.
//!
//! Functions are step functions (Lebesgue spaces) or finitely supported
//! sequences (atomic spaces). Rearrangements, r.i. norms, preimages under
//! catalog symbols and Cesàro/maximal ergodic averages are computed in closed
//! form on that representation.

pub mod ergodic;
pub mod error;
pub mod json;
pub mod measure_space;
pub mod rearrange;
pub mod spaces;
pub mod stepfn;
pub mod suites;
pub mod symbols;

pub use error::{Error, Result};
pub use measure_space::{measure, AtomSet, Interval, MeasSet, MeasureSpace, SpaceKind};
pub use rearrange::Rearranged;
pub use spaces::{NormSpec, QuasiconcaveFn, XiWeight};
pub use stepfn::{indicator, integrate, linear_combine, pointwise_leq, AtomSeq, MeasFn, StepFn};
pub use symbols::Symbol;
