use std::time::Instant;

use crate::classical_series::{hgs_value_at_1, SeriesSpec};
use crate::hg_datum::Rational;
use crate::numeric::{pi, Complex, Real};
use crate::report::{ReportItem, Status, VerificationReport};

use super::{integrate_segment, trace_level_set, ContourPath, Hauptmodul, Integral, Integrand, PeriodError};

/// Relative agreement required between the series and the integral.
pub const REL_TOL: f64 = 1e-8;
/// Mesh of the traced level sets.
pub const TRACE_STEP: f64 = 0.05;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Factor {
    /// `k`
    Int(i64),
    /// `k i / pi`
    IOverPi(i64),
    /// `k i`
    I(i64),
}

impl Factor {
    fn value(&self, prec: u32) -> Complex {
        match *self {
            Factor::Int(k) => Complex::from_real(Real::from_i64(k, prec)),
            Factor::IOverPi(k) => Complex::new(Real::zero(prec), Real::from_i64(k, prec).div(&pi(prec))),
            Factor::I(k) => Complex::new(Real::zero(prec), Real::from_i64(k, prec)),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct PeriodCase {
    pub id: &'static str,
    pub upper: &'static [(i64, i64)],
    /// lower parameters without the `1` that becomes `k!`
    pub lower: &'static [(i64, i64)],
    /// the series side is divided by `pi`
    pub over_pi: bool,
    pub factor: Factor,
    pub integrand: Integrand,
    pub hauptmodul: Hauptmodul,
    /// the contour is a reading of an underdetermined description
    pub interpretation_dependent: bool,
}

const H: (i64, i64) = (1, 2);
const ONE: (i64, i64) = (1, 1);

pub const PERIOD_CASES: &[PeriodCase] = &[
    PeriodCase {
        id: "p11a",
        upper: &[H, H, H, H, H, H],
        lower: &[ONE, ONE, ONE, ONE, ONE],
        over_pi: false,
        factor: Factor::Int(16),
        integrand: Integrand::Tau2F86,
        hauptmodul: Hauptmodul::T2,
        interpretation_dependent: false,
    },
    PeriodCase {
        id: "p11b",
        upper: &[H, (5, 4), H, H, H, H, H],
        lower: &[(1, 4), ONE, ONE, ONE, ONE, ONE],
        over_pi: false,
        factor: Factor::IOverPi(32),
        integrand: Integrand::TauF84,
        hauptmodul: Hauptmodul::T2,
        interpretation_dependent: false,
    },
    PeriodCase {
        id: "p_sixth",
        upper: &[H, H, H, H, (1, 6), (5, 6)],
        lower: &[ONE, ONE, ONE, (4, 3), (2, 3)],
        over_pi: false,
        factor: Factor::Int(16),
        integrand: Integrand::Tau2MixT2Sixth,
        hauptmodul: Hauptmodul::T2,
        interpretation_dependent: false,
    },
    PeriodCase {
        id: "p_third",
        upper: &[H, H, H, H, (1, 3), (2, 3)],
        lower: &[(5, 6), (7, 6), ONE, ONE, ONE],
        over_pi: true,
        factor: Factor::I(6),
        integrand: Integrand::MixT3,
        hauptmodul: Hauptmodul::T3,
        interpretation_dependent: true,
    },
];

impl PeriodCase {
    pub fn find(id: &str) -> Result<&'static PeriodCase, PeriodError> {
        PERIOD_CASES.iter().find(|c| c.id == id).ok_or_else(|| PeriodError::UnknownCase(id.to_string()))
    }

    pub fn spec(&self) -> SeriesSpec {
        let r = |v: &[(i64, i64)]| v.iter().map(|&(n, d)| Rational::new(n, d)).collect::<Vec<_>>();
        SeriesSpec::new(&r(self.upper), &r(self.lower))
    }

    /// Series side and its error bound `2^e`.
    pub fn series_value(&self, precision: u32) -> Result<(Real, f64), PeriodError> {
        let v = hgs_value_at_1(&self.spec(), precision + 8)?;
        let mut x = v.value;
        if self.over_pi {
            x = x.div(&pi(precision + 8));
        }
        Ok((x.with_prec(precision), v.error_log2))
    }

    /// Straight segment between the seed and its mirror point.
    pub fn line_path(&self, precision: u32) -> ContourPath {
        let s = self.hauptmodul.seed(precision);
        let e = self.hauptmodul.mirror(&s);
        ContourPath::line(s, e)
    }

    pub fn traced_path(&self, precision: u32) -> Result<ContourPath, PeriodError> {
        trace_level_set(self.hauptmodul, &self.hauptmodul.seed(precision), TRACE_STEP)
    }

    /// `factor * int_path integrand`.
    pub fn integral_side(&self, path: &ContourPath, precision: u32) -> Result<(Complex, Integral), PeriodError> {
        let i = integrate_segment(self.integrand, path, precision + 8)?;
        let v = (&self.factor.value(precision + 8) * &i.value).with_prec(precision);
        Ok((v, i))
    }
}

fn rel(a: &Complex, b: &Complex) -> f64 {
    let d = (a - b).abs();
    if d.is_zero() {
        return 0.0;
    }
    d.div(&b.abs()).to_f64()
}

fn fmt(z: &Complex) -> String {
    let im = z.im.to_decimal(6);
    format!("{} + {}i", z.re.to_decimal(30), im)
}

/// Series side against the scaled integral over the straight segment and over the traced level set.
pub fn verify_period(case_id: &str, precision: u32) -> Result<VerificationReport, PeriodError> {
    let case = PeriodCase::find(case_id)?;
    let mut rep = VerificationReport::new(format!("periods:{}", case.id));
    let t0 = Instant::now();
    let (s, s_err) = case.series_value(precision)?;
    let series = Complex::from_real(s);
    let note = if case.interpretation_dependent { " interpretation-dependent" } else { "" };
    let theorem = !case.interpretation_dependent;
    let item = |path: &str, val: &Complex, q: &Integral, started: Instant| {
        let r = rel(val, &series);
        ReportItem {
            case: format!("period:{}:{path}", case.id),
            parameters: format!(
                "bits={precision} nodes={} evaluations={} quadrature_err_log2={:.1} series_err_log2={:.1}{note}",
                q.nodes, q.evaluations, q.error_log2, s_err
            ),
            status: if r < REL_TOL { Status::Pass } else { Status::Fail },
            theorem,
            lhs: series.re.to_decimal(30),
            rhs: fmt(val),
            discrepancy: Some(r),
            runtime_ms: started.elapsed().as_millis() as u64,
        }
    };
    let (line_val, line_q) = case.integral_side(&case.line_path(precision), precision)?;
    rep.push(item("line", &line_val, &line_q, t0));
    let t1 = Instant::now();
    let traced = case.traced_path(precision).and_then(|p| case.integral_side(&p, precision));
    match traced {
        Ok((v, q)) => {
            rep.push(item("level-set", &v, &q, t1));
            let r = rel(&v, &line_val);
            rep.push(ReportItem {
                case: format!("period:{}:path-agreement", case.id),
                parameters: format!("bits={precision}{note}"),
                status: if r < REL_TOL { Status::Pass } else { Status::Fail },
                theorem,
                lhs: fmt(&line_val),
                rhs: fmt(&v),
                discrepancy: Some(r),
                runtime_ms: t1.elapsed().as_millis() as u64,
            });
        }
        Err(e) if case.interpretation_dependent => rep.push(ReportItem {
            case: format!("period:{}:level-set", case.id),
            parameters: format!("bits={precision}{note}"),
            status: Status::Inconclusive,
            theorem: false,
            lhs: series.re.to_decimal(30),
            rhs: e.to_string(),
            discrepancy: None,
            runtime_ms: t1.elapsed().as_millis() as u64,
        }),
        Err(e) => return Err(e),
    }
    Ok(rep)
}
