//! Hypergeometric data: parameter multisets, Galois orbit predicates, the
//! e-profile with weight and Tate twist, gamma vectors and the Whipple family.

mod datum;
mod gamma;
mod profile;
mod whipple;

pub use datum::{frac_part, lcd, parse_rational, HGDatum, OrbitPredicates};
pub use gamma::GammaVector;
pub use profile::EProfile;
pub use whipple::{whipple_family, WhippleFamily, SEVEN_PAIRS};

use num_rational::Ratio;

pub type Rational = Ratio<i64>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DatumError {
    #[error("alpha and beta must be non-empty lists of equal length")]
    BadLength,
    #[error("the first entry of beta must be an integer")]
    BadBeta1,
    #[error("lambda must be nonzero")]
    ZeroLambda,
    #[error("datum is not defined over Q")]
    NotDefinedOverQ,
    #[error("cannot parse datum: {0}")]
    Parse(String),
}
