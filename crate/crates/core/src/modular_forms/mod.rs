//! q-expansions of eta quotients and classical series, newform coefficients from
//! eta formulas, fixtures or the LMFDB, numeric evaluation and L-values.

mod eval;
mod lmfdb;
mod lvalue;
mod newform;
mod qseries;

pub use eval::{eta_value, eval_qseries, Evaluated};
pub use lmfdb::{LmfdbClient, BASE_URL_VAR, DEFAULT_BASE_URL};
pub use lvalue::{fe_sign_diagnostic, l_value, LValue};
pub use newform::{
    builtin_eta, CoefficientProvider, CoefficientSource, EtaCombination, Fixture, FixtureStore, Label, NewformHandle,
    BUILTIN_ETA_NAMES,
};
pub use qseries::{eta_quotient, euler_product, parse_eta_spec, sigma1, special_series, QSeries, SpecialSeries, MAX_TERMS};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ModularError {
    #[error("exact division left a remainder")]
    InexactDivision,
    #[error("{0} coefficients requested, above the supported maximum")]
    TruncationTooLarge(usize),
    #[error("exponent lattices of the operands do not match")]
    IncompatibleExponents,
    #[error("malformed eta product specification")]
    BadEtaSpec,
    #[error("unknown series '{0}'")]
    UnknownSeries(String),
    #[error("unknown or malformed newform label '{0}'")]
    UnknownLabel(String),
    #[error("coefficients unavailable: {0}")]
    CoefficientUnavailable(String),
    #[error("network error: {0}")]
    Network(String),
    #[error("coefficients are not rational integers: {0}")]
    NonIntegralCoefficients(String),
    #[error("fixture error: {0}")]
    Fixture(String),
    #[error("tail bound failure: {0}")]
    TailBoundFailure(String),
    #[error("functional equation with sign {sign} is inconsistent (discrepancy 2^{discrepancy_log2:.1})")]
    FunctionalEquationMismatch { sign: i8, discrepancy_log2: f64 },
    #[error("bad argument: {0}")]
    BadArgument(String),
}
