use std::collections::HashMap;

use num_traits::ToPrimitive;

use crate::hg_datum::Rational;
use crate::numeric::{pi, Complex, Real};

use super::newform::EtaCombination;
use super::qseries::QSeries;
use super::ModularError;

const GUARD: u32 = 24;

/// `exp(2 pi i tau)` at working precision `w`.
fn nome(tau: &Complex, w: u32) -> Complex {
    let two_pi = pi(w).ldexp(1);
    let r = crate::numeric::exp(&(-&two_pi.mul(&tau.im)));
    Complex::cis(&two_pi.mul(&tau.re)).scale(&r)
}

/// Dedekind eta by the pentagonal series, with the tail bounded by a geometric series.
pub fn eta_value(tau: &Complex, prec: u32) -> Result<Complex, ModularError> {
    let w = prec + GUARD;
    let tau = tau.clone().with_prec(w);
    if tau.im.signum() <= 0 {
        return Err(ModularError::TailBoundFailure("tau must lie in the upper half plane".into()));
    }
    // log2 |q|
    let lq = -2.0 * std::f64::consts::PI * tau.im.to_f64() / std::f64::consts::LN_2;
    let q = nome(&tau, w);
    let mut sum = Complex::one(w);
    let mut qk = Complex::one(w);
    let mut a = Complex::one(w);
    let mut k: i64 = 0;
    loop {
        // a = q^{k(3k-1)/2} at the top of the loop
        let e_next = ((k + 1) * (3 * k + 2) / 2) as f64;
        let tail_log2 = e_next * lq + 1.0 - (1.0 - lq.exp2()).log2();
        if tail_log2 < -(w as f64) {
            break;
        }
        if k > 100_000 {
            return Err(ModularError::TailBoundFailure(format!("eta needs more than 10^5 terms at Im tau = {}", tau.im.to_f64())));
        }
        // advance to k + 1: exponent grows by 3k + 1
        a = &(&(&a * &qk.square()) * &qk) * &q;
        qk = &qk * &q;
        k += 1;
        let pair = &a + &(&a * &qk);
        sum = if k % 2 == 1 { &sum - &pair } else { &sum + &pair };
    }
    let q24 = nome(&Complex::new(tau.re.div_i64(24), tau.im.div_i64(24)), w);
    Ok((&q24 * &sum).with_prec(prec))
}

impl EtaCombination {
    /// Numeric value at `tau`, sharing eta evaluations between terms.
    pub fn eval(&self, tau: &Complex, prec: u32) -> Result<Complex, ModularError> {
        let w = prec + 16;
        let mut cache: HashMap<Rational, Complex> = HashMap::new();
        let mut total = Complex::zero(w);
        for (c, spec) in &self.terms {
            let mut prod = Complex::from_real(Real::from_i64(*c, w));
            for (d, r) in spec {
                if !cache.contains_key(d) {
                    let dt = Complex::new(tau.re.mul(&Real::from_ratio(&big(*d), w)), tau.im.mul(&Real::from_ratio(&big(*d), w)));
                    cache.insert(*d, eta_value(&dt, w)?);
                }
                prod = &prod * &cache[d].powi(*r);
            }
            total = &total + &prod;
        }
        Ok(total.with_prec(prec))
    }
}

fn big(r: Rational) -> num_rational::BigRational {
    num_rational::BigRational::new((*r.numer()).into(), (*r.denom()).into())
}

/// A value together with a bound on the truncation error.
#[derive(Clone, Debug)]
pub struct Evaluated {
    pub value: Complex,
    pub tail_bound_log2: f64,
}

/// Evaluate a truncated q-series at `tau`, bounding the missing tail by the envelope
/// `|c_m| <= m^((k + 1)/2)` in stride units (divisor count at most `m`, Deligne bound).
pub fn eval_qseries(s: &QSeries, weight: u32, tau: &Complex, prec: u32) -> Result<Evaluated, ModularError> {
    let w = prec + GUARD;
    let tau = tau.clone().with_prec(w);
    if tau.im.signum() <= 0 {
        return Err(ModularError::TailBoundFailure("tau must lie in the upper half plane".into()));
    }
    let stride = s.stride.to_f64().unwrap();
    let lr = -2.0 * std::f64::consts::PI * tau.im.to_f64() * stride / std::f64::consts::LN_2;
    let a = (weight as f64 + 1.0) / 2.0;
    let m0 = (s.valid_to() / s.stride).ceil().to_integer().max(1) as f64;
    let growth = a * ((m0 + 1.0) / m0).log2() + lr;
    if growth >= 0.0 {
        return Err(ModularError::TailBoundFailure("envelope does not decay at this truncation".into()));
    }
    let lead_log2 = (s.lead / s.stride).to_f64().unwrap() * lr;
    let tail = a * m0.log2() + m0 * lr - (1.0 - growth.exp2()).log2() + lead_log2.max(0.0);
    if tail > -(prec as f64) {
        return Err(ModularError::TailBoundFailure(format!("tail bound 2^{tail:.1} exceeds 2^-{prec}")));
    }
    let step = Complex::new(tau.re.mul(&Real::from_ratio(&big(s.stride), w)), tau.im.mul(&Real::from_ratio(&big(s.stride), w)));
    let qs = nome(&step, w);
    let lead = Complex::new(tau.re.mul(&Real::from_ratio(&big(s.lead), w)), tau.im.mul(&Real::from_ratio(&big(s.lead), w)));
    // Horner in q^stride
    let mut acc = Complex::zero(w);
    for c in s.coeffs.iter().rev() {
        acc = &(&acc * &qs) + &Complex::from_real(Real::from_bigint(c, w));
    }
    let value = &nome(&lead, w) * &acc;
    Ok(Evaluated { value: value.with_prec(prec), tail_bound_log2: tail })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical_series::gamma;
    use crate::modular_forms::eta_quotient;

    fn c(re: f64, im: f64, p: u32) -> Complex {
        Complex::from_f64(re, im, p)
    }

    fn close(a: &Complex, b: &Complex, log2: i64) -> bool {
        let d = a - b;
        d.is_zero() || d.magnitude() < log2
    }

    #[test]
    fn eta_at_i() {
        let p = 160;
        let v = eta_value(&Complex::i(p), p).unwrap();
        // Gamma(1/4) / (2 pi^(3/4))
        let g = gamma(&num_rational::BigRational::new(1.into(), 4.into()), p + 20).unwrap();
        let pi34 = crate::numeric::exp(&crate::numeric::ln(&pi(p + 20)).mul(&Real::from_frac(3, 4, p + 20)));
        let want = g.div(&pi34.ldexp(1));
        assert!(v.re.sub(&want).abs().magnitude() < -150);
        assert!(v.im.abs().magnitude() < -150);
        assert_eq!(&want.to_decimal(6)[..8], "0.768225");
    }

    #[test]
    fn eta_multiplier_and_inversion() {
        let p = 128;
        let tau = c(0.0, 0.5, p);
        let shifted = Complex::new(tau.re.add(&Real::one(p)), tau.im.clone());
        let ratio = &eta_value(&shifted, p).unwrap() / &eta_value(&tau, p).unwrap();
        let want = Complex::cis(&pi(p).div_i64(12));
        assert!(close(&ratio, &want, -120));

        let tau = c(0.5, 1.0, p);
        let inv = &(-&Complex::one(p)) / &tau;
        let lhs = eta_value(&inv, p).unwrap();
        let rhs = &(-&tau.mul_i()).sqrt() * &eta_value(&tau, p).unwrap();
        assert!(close(&lhs, &rhs, -(p as i64) + 8));
    }

    #[test]
    fn lower_half_plane_rejected() {
        assert!(eta_value(&c(0.0, -1.0, 64), 64).is_err());
    }

    #[test]
    fn series_eval_matches_eta_product() {
        let p = 128;
        let tau = c(0.1, 0.7, p);
        let s = eta_quotient(&[(Rational::from_integer(4), 6)], 400).unwrap();
        let e = eval_qseries(&s, 3, &tau, p).unwrap();
        let direct = EtaCombination::single(&[(4, 6)]).eval(&tau, p).unwrap();
        assert!(close(&e.value, &direct, -110));
        // too short for the requested precision
        let short = eta_quotient(&[(Rational::from_integer(4), 6)], 5).unwrap();
        assert!(eval_qseries(&short, 3, &tau, p).is_err());
    }

    #[test]
    fn t2_inversion() {
        let p = 96;
        let t2 = EtaCombination::single(&[(2, 24), (1, -24)]);
        let t2v = |t: &Complex| t2.eval(t, p).unwrap().mul_i64(-64);
        for k in 0..10 {
            let tau = c(-0.45 + 0.1 * k as f64, 0.55 + 0.03 * k as f64, p);
            let inv = &(-&Complex::one(p)) / &tau.mul_i64(2);
            let prod = &t2v(&inv) * &t2v(&tau);
            assert!(close(&prod, &Complex::one(p), -70), "k={k}");
        }
    }
}
