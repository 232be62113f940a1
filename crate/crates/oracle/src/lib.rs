//! Test oracles that share no code with the `exptype` library.
//!
//! * [`ball`] evaluates cyclotomic numbers and Laurent polynomials as rigorous
//!   complex balls in fixed-point big-integer arithmetic, so that numerical
//!   equality decisions at 30+ digits are interval-safe.
//! * [`grid`] rasterizes the elementary Newton regions on the integer lattice,
//!   sums the point sets and reads back the lower-right hull.
//!
//! Everything here takes plain data (orders, exponent/rational pairs, integer
//! edges) so the library types never leak into the oracle side.

pub mod ball;
pub mod grid;

pub use ball::{ComplexBall, NumericVerdict, RealBall};
