//! Classical hypergeometric series: exact truncations, certified values at `z = 1`,
//! Gamma values, and the Whipple, Clausen and composition identities.

mod checks;
mod gamma;
mod series;
mod tail;

use thiserror::Error;

pub use checks::{
    clausen_check, derivative_relation_check, lemma_233_check, random_terminating_tuples, whipple_check, whipple2_check,
    WhippleMode,
};
pub use gamma::{bernoulli, gamma, gamma_ratio, ln_gamma};
pub use series::{hgs_truncated, pochhammer, rational_mod, PowerSeries, SeriesSpec};
pub use tail::{hgs_value_at_1, SeriesValue};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SeriesError {
    #[error("lower parameter vanishes at term {k}")]
    DenominatorPole { k: usize },
    #[error("series does not converge at 1 (sigma = {0})")]
    NotConvergent(String),
    #[error("requested precision not reached")]
    PrecisionUnreachable,
    #[error("series does not terminate")]
    NonTerminating,
    #[error("Gamma pole at {0}")]
    GammaPole(String),
    #[error("parameter count mismatch")]
    BadParameters,
}
