//! Contour integrals of modular integrands along line segments and traced level
//! sets of Hauptmoduln, and the period identities for the hypergeometric values.

mod cases;
mod quadrature;
mod trace;

use std::str::FromStr;

use crate::classical_series::SeriesError;
use crate::modular_forms::{eta_value, ModularError};
use crate::numeric::{Complex, Real};

pub use cases::{verify_period, PeriodCase, PERIOD_CASES};
pub use quadrature::{gauss_legendre, integrate_line, Integral};
pub use trace::trace_level_set;

pub const DEFAULT_PRECISION: u32 = 192;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PeriodError {
    #[error("quadrature did not converge ({nodes} nodes, split depth {depth})")]
    NoConvergence { nodes: usize, depth: u32 },
    #[error("path leaves the upper half plane")]
    PathBelowRealAxis,
    #[error("seed is not on the level set (|t| = {modulus})")]
    SeedNotOnLevelSet { modulus: f64 },
    #[error("tracing stalled: {0}")]
    TracingStalled(String),
    #[error("unknown period case '{0}'")]
    UnknownCase(String),
    #[error("unknown integrand '{0}'")]
    UnknownIntegrand(String),
    #[error(transparent)]
    Modular(#[from] ModularError),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// Integrands in the registry; `f_N(tau/2)` denotes the eta form of the newform of level `N`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Integrand {
    /// `tau^2 (eta(tau)^12 + 32 eta(tau)^4 eta(4 tau)^8)`
    Tau2F86,
    /// `tau eta(tau)^4 eta(2 tau)^4`
    TauF84,
    /// `(1/3 + tau + tau^2)(eta(tau)^12 - 27 eta(3 tau)^12)`
    MixT3,
    /// `eta(tau)^4 eta(2 tau)^4 + 27 eta(3 tau)^4 eta(6 tau)^4`
    MixT2Sixth,
    /// `tau^2` times [`Integrand::MixT2Sixth`]
    Tau2MixT2Sixth,
}

impl FromStr for Integrand {
    type Err = PeriodError;
    fn from_str(s: &str) -> Result<Self, PeriodError> {
        Ok(match s {
            "tau2_f86" => Integrand::Tau2F86,
            "tau_f84" => Integrand::TauF84,
            "mix_t3" => Integrand::MixT3,
            "mix_t2_sixth" => Integrand::MixT2Sixth,
            "tau2_mix_t2_sixth" => Integrand::Tau2MixT2Sixth,
            _ => return Err(PeriodError::UnknownIntegrand(s.to_string())),
        })
    }
}

fn scaled(tau: &Complex, k: i64) -> Complex {
    Complex::new(tau.re.mul_i64(k), tau.im.mul_i64(k))
}

fn eta_at(tau: &Complex, k: i64, prec: u32) -> Result<Complex, PeriodError> {
    Ok(eta_value(&scaled(tau, k), prec)?)
}

impl Integrand {
    pub fn eval(&self, tau: &Complex, prec: u32) -> Result<Complex, PeriodError> {
        if tau.im.signum() <= 0 {
            return Err(PeriodError::PathBelowRealAxis);
        }
        let w = prec + 8;
        let tau = tau.clone().with_prec(w);
        let f84 = |k: i64| -> Result<Complex, PeriodError> {
            Ok((&eta_at(&tau, k, w)? * &eta_at(&tau, 2 * k, w)?).powi(4))
        };
        let v = match self {
            Integrand::Tau2F86 => {
                let e1 = eta_at(&tau, 1, w)?;
                let e4 = eta_at(&tau, 4, w)?;
                let e1_4 = e1.powi(4);
                let f = &e1_4.powi(3) + &(&e1_4 * &e4.powi(8)).mul_i64(32);
                &tau.square() * &f
            }
            Integrand::TauF84 => &tau * &f84(1)?,
            Integrand::MixT3 => {
                let poly = &(&tau.square() + &tau) + &Complex::from_real(Real::from_frac(1, 3, w));
                let f = &eta_at(&tau, 1, w)?.powi(12) - &eta_at(&tau, 3, w)?.powi(12).mul_i64(27);
                &poly * &f
            }
            Integrand::MixT2Sixth => &f84(1)? + &f84(3)?.mul_i64(27),
            Integrand::Tau2MixT2Sixth => &tau.square() * &(&f84(1)? + &f84(3)?.mul_i64(27)),
        };
        Ok(v.with_prec(prec))
    }
}

/// Hauptmoduln whose unit-modulus level sets carry the contours.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Hauptmodul {
    /// `-64 eta(2 tau)^24 / eta(tau)^24`
    T2,
    /// `108 x^2 / (x^2 + 27)^2` with `x = (eta(tau) / eta(3 tau))^6`
    T3,
}

impl FromStr for Hauptmodul {
    type Err = PeriodError;
    fn from_str(s: &str) -> Result<Self, PeriodError> {
        match s {
            "t2" => Ok(Hauptmodul::T2),
            "t3" => Ok(Hauptmodul::T3),
            _ => Err(PeriodError::UnknownIntegrand(s.to_string())),
        }
    }
}

impl Hauptmodul {
    pub fn eval(&self, tau: &Complex, prec: u32) -> Result<Complex, PeriodError> {
        if tau.im.signum() <= 0 {
            return Err(PeriodError::PathBelowRealAxis);
        }
        let w = prec + 8;
        let v = match self {
            Hauptmodul::T2 => (&eta_at(tau, 2, w)? / &eta_at(tau, 1, w)?).powi(24).mul_i64(-64),
            Hauptmodul::T3 => {
                let x2 = (&eta_at(tau, 1, w)? / &eta_at(tau, 3, w)?).powi(12);
                let d = &x2 + &Complex::from_real(Real::from_i64(27, w));
                &x2.mul_i64(108) / &d.square()
            }
        };
        Ok(v.with_prec(prec))
    }

    /// Default seed: the order-two elliptic point where `t = 1`.
    pub fn seed(&self, prec: u32) -> Complex {
        match self {
            Hauptmodul::T2 => Complex::new(Real::from_frac(1, 2, prec), Real::from_frac(1, 2, prec)),
            Hauptmodul::T3 => Complex::new(Real::zero(prec), Real::one(prec).div(&Real::from_i64(3, prec).sqrt())),
        }
    }

    /// Vertical line of symmetry: `t(2c - conj tau) = conj t(tau)`.
    pub fn axis(&self) -> Real {
        match self {
            Hauptmodul::T2 => Real::zero(64),
            Hauptmodul::T3 => Real::from_frac(-1, 2, 64),
        }
    }

    /// Mirror image of `tau` across the symmetry axis.
    pub fn mirror(&self, tau: &Complex) -> Complex {
        let c = self.axis().with_prec(tau.prec()).ldexp(1);
        Complex::new(&c - &tau.re, tau.im.clone())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PathKind {
    Line,
    LevelSet(Hauptmodul),
}

/// Polyline in the upper half plane, traversed from the first node to the last.
#[derive(Clone, Debug)]
pub struct ContourPath {
    pub kind: PathKind,
    pub nodes: Vec<Complex>,
    pub orientation: String,
}

impl ContourPath {
    pub fn line(a: Complex, b: Complex) -> Self {
        ContourPath { kind: PathKind::Line, nodes: vec![a, b], orientation: "first endpoint to second".into() }
    }

    pub fn reversed(&self) -> Self {
        let mut nodes = self.nodes.clone();
        nodes.reverse();
        ContourPath { kind: self.kind, nodes, orientation: format!("reverse of: {}", self.orientation) }
    }

    pub fn start(&self) -> &Complex {
        &self.nodes[0]
    }

    pub fn end(&self) -> &Complex {
        self.nodes.last().expect("paths have two or more nodes")
    }

    /// Largest deviation of the nodes from `|t| = 1`.
    pub fn level_deviation(&self, h: Hauptmodul) -> Result<f64, PeriodError> {
        let mut worst = 0.0f64;
        for z in &self.nodes {
            worst = worst.max((h.eval(z, 64)?.abs().to_f64() - 1.0).abs());
        }
        Ok(worst)
    }
}

/// `int_path f(tau) dtau`, summing the per-segment quadratures.
pub fn integrate_segment(integrand: Integrand, path: &ContourPath, precision: u32) -> Result<Integral, PeriodError> {
    if path.nodes.iter().any(|z| z.im.signum() <= 0) {
        return Err(PeriodError::PathBelowRealAxis);
    }
    let w = precision + 8;
    let f = |z: &Complex| integrand.eval(z, w);
    let mut parts = Vec::with_capacity(path.nodes.len() - 1);
    for seg in path.nodes.windows(2) {
        parts.push(integrate_line(&f, &seg[0], &seg[1], precision)?);
    }
    Ok(quadrature::combine(&parts, precision))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modular_forms::{eta_quotient, parse_eta_spec};

    #[test]
    fn seeds_lie_on_level_sets() {
        for h in [Hauptmodul::T2, Hauptmodul::T3] {
            let s = h.seed(128);
            let v = h.eval(&s, 128).unwrap();
            assert!((&v - &Complex::one(128)).abs().magnitude() < -100, "{h:?}: {v}");
            let m = h.eval(&h.mirror(&s), 128).unwrap();
            assert!((&m - &Complex::one(128)).abs().magnitude() < -100);
        }
    }

    #[test]
    fn f86_eta_identity_as_series() {
        // f_{8.6.a.a}(tau/2) = eta(tau)^12 + 32 eta(tau)^4 eta(4 tau)^8, i.e. the form in q^{1/2}
        let n = 60;
        let fixture = crate::modular_forms::FixtureStore::default_location().load("8.6.a.a").unwrap().expect("fixture present");
        let a = eta_quotient(&parse_eta_spec("1^12").unwrap(), n).unwrap();
        let b = eta_quotient(&parse_eta_spec("1^4 4^8").unwrap(), n).unwrap();
        let rhs = a.add(&b.scale(&num_bigint::BigInt::from(32))).unwrap();
        for k in 1..n {
            // q^{k/2} coefficient of the right side is a_k
            let c = rhs.coeff(crate::hg_datum::Rational::new(k as i64, 2)).unwrap();
            assert_eq!(c, num_bigint::BigInt::from(fixture.an[k - 1]), "k = {k}");
        }
    }

    #[test]
    fn path_below_axis_rejected() {
        let p = ContourPath::line(Complex::from_f64(0.0, 0.5, 64), Complex::from_f64(1.0, -0.1, 64));
        assert_eq!(integrate_segment(Integrand::TauF84, &p, 64).unwrap_err(), PeriodError::PathBelowRealAxis);
        assert!(Integrand::from_str("nope").is_err());
    }
}
