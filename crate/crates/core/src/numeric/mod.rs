//! Arbitrary precision binary floating point: reals, complex numbers and the
//! elementary functions needed by the series, Gauss sum and period code.

mod complex;
mod elementary;
mod real;

pub use complex::Complex;
pub use elementary::{atan2, cos_sin, exp, ln, ln2, pi};
pub use real::Real;
