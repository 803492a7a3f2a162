//! Finite-field hypergeometric sums: the period sums `P`, the normalized functions `H`,
//! Frobenius traces and Euler factors, and checks of the character-sum identities.

mod bcm;
mod identities;
mod period;
mod trace;

use thiserror::Error;

use crate::ff_core::FfError;
use crate::hg_datum::DatumError;

pub use bcm::{h_exact, h_value, times_q_power, HMethod, HValue};

pub use identities::{
    clausen_check, clausen_pair, ff_identity_check, gauss_2p1_check, hd3_vanishing_check, k3_affine_count, k3_count_check,
    kummer_check, kummer_tuple, p_at_one_integer, wellposed_6p5_check, wellposed_tuple, whipple_ff_check, whipple_ss,
    Identity, IdentityParams, K3_MAX_P, SWEEP_MAX_Q,
};
pub use period::{
    admissible_omegas, datum_characters, jacobi_factor, lambda_in_field, p_normalized, p_normalized_table,
    p_recursive, p_spectral, p_spectral_chars, period_table, BinomialCache, JacobiFactor,
};
pub use trace::{
    euler_factor_prim, format_poly, frobenius_trace, frobenius_trace_q, kronecker, self_dual_sign, EulerFactor,
    OneDim,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CharSumError {
    #[error(transparent)]
    Field(#[from] FfError),
    #[error(transparent)]
    Datum(#[from] DatumError),
    #[error("character lists have incompatible lengths")]
    BadCharacterList,
    #[error("recursion over F_{q} with {n} parameters exceeds the work budget")]
    FieldTooLargeForRecursion { q: u32, n: usize },
    #[error("omega must generate the character group")]
    NotAGenerator,
    #[error("datum or argument has bad reduction")]
    BadReduction,
    #[error("division in the cyclotomic ring was not exact")]
    Inexact,
    #[error("F_{q} has no element of order {m}")]
    NoOrderMElement { q: u32, m: u32 },
    #[error("value depends on the choice of omega")]
    OmegaDependence,
    #[error("value is not rational")]
    NotRational,
    #[error("rounding not certified: distance {distance:.3e}, error bound {bound:.3e}")]
    RoundingUnsafe { distance: f64, bound: f64 },
    #[error("datum is not self-dual")]
    NotSelfDual,
    #[error("datum is not defined over Q")]
    NotDefinedOverQ,
    #[error("prime {0} is not admissible")]
    BadPrime(u32),
    #[error("Euler factor needs lambda = 1")]
    NeedsLambdaOne,
    #[error("power sums are inconsistent: {0}")]
    PowerSumInconsistent(String),
    #[error("integer overflow")]
    Overflow,
    #[error("unknown identity {0}")]
    UnknownIdentity(String),
    #[error("identity hypotheses fail: {0}")]
    Hypothesis(String),
}

#[cfg(test)]
mod tests;
