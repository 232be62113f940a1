//! Formal invariants of direct images of exponential-type D-modules,
//! computed from local branch-germ data.

pub mod cyclotomic;
pub mod laurent;
pub mod branch;
pub mod newton;
pub mod decomposition;
pub mod resolution;
pub mod realization;
pub mod pipeline;
