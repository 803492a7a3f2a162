use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::ff_core::{CharIndex, CycRat, FiniteFieldTable, GaussSums};
use crate::hg_datum::{GammaVector, HGDatum, Rational};
use crate::numeric::{pi, Complex, Real};

use super::period::{jacobi_factor, p_recursive};
use super::CharSumError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HMethod {
    /// `P / J` in `Q(zeta_M)`; needs `q = 1 mod M`
    Exact,
    /// Gauss-sum formula evaluated in floating point at the given starting precision
    Direct { precision: u32 },
}

#[derive(Clone, Debug)]
pub struct HValue {
    pub value: BigRational,
    /// rigorous bound on the error of the rounded quantity (direct method only)
    pub error_bound: Option<f64>,
    /// distance of the rounded quantity to the chosen integer (direct method only)
    pub rounding_distance: Option<f64>,
    pub precision_used: Option<u32>,
}

/// `H_q(alpha, beta; lambda)`; `lambda` given as a rational reduced into the field.
pub fn h_value(datum: &HGDatum, lambda: Rational, field: &FiniteFieldTable, method: HMethod) -> Result<HValue, CharSumError> {
    match method {
        HMethod::Exact => {
            let v = h_exact(datum, lambda, field)?;
            let value = v.to_rational().ok_or(CharSumError::NotRational)?;
            Ok(HValue { value, error_bound: None, rounding_distance: None, precision_used: None })
        }
        HMethod::Direct { precision } => {
            let mut prec = precision.max(64);
            loop {
                match h_direct_at(datum, lambda, field, prec) {
                    Err(CharSumError::RoundingUnsafe { .. }) if prec < 1024 => prec *= 2,
                    other => return other,
                }
            }
        }
    }
}

/// `H = P / J` in `Q(zeta_M)` with `omega` normalized as for `p_normalized`.
pub fn h_exact(datum: &HGDatum, lambda: Rational, field: &FiniteFieldTable) -> Result<CycRat, CharSumError> {
    let m = datum.lcd();
    if (field.q() - 1) % m != 0 {
        return Err(CharSumError::NoOrderMElement { q: field.q(), m });
    }
    let lam = super::period::lambda_in_field(lambda, field)?;
    let omega = CharIndex(field.q() as u64 - 2);
    let p = p_recursive(datum, lam, field, omega)?;
    let j = jacobi_factor(datum, field, omega)?;
    CycRat::from(&p).div(&CycRat::from(&j.value)).ok_or(CharSumError::Inexact)
}

fn mod_p(x: &BigInt, p: u32) -> i64 {
    let r = x % BigInt::from(p);
    let r = r.to_i64().unwrap();
    r.rem_euclid(p as i64)
}

fn h_direct_at(datum: &HGDatum, lambda: Rational, field: &FiniteFieldTable, prec: u32) -> Result<HValue, CharSumError> {
    let gv = GammaVector::of(datum)?;
    let p = field.p();
    if datum.lcd() % p == 0 {
        return Err(CharSumError::BadReduction);
    }
    // N^{-1} lambda in F_q
    let lam = super::period::lambda_in_field(lambda, field)?;
    let nn = mod_p(gv.n_const.numer(), p);
    let nd = mod_p(gv.n_const.denom(), p);
    if nn == 0 || nd == 0 {
        return Err(CharSumError::BadReduction);
    }
    let ninv_lam = field.mul(field.div(field.from_int(nd), field.from_int(nn)).unwrap(), lam);
    let log_arg = field.dlog(ninv_lam).unwrap() as u64;

    let q = field.q() as u64;
    let n1 = q - 1;
    let gs = GaussSums::new(field, prec)?;
    let gauss: Vec<Complex> = gs.all().into_iter().map(|g| g.value).collect();
    let w = prec + 16;
    let two_pi = pi(w).ldexp(1);
    let unit = |k: u64| -> Complex {
        let t = (&two_pi * &Real::from_i64((k % n1) as i64, w)).div_i64(n1 as i64);
        Complex::cis(&t)
    };
    let s0 = gv.s(0, q);
    let mut total = Complex::zero(w);
    for m in 0..n1 {
        let mut term = Complex::one(w);
        for &pj in &gv.plist {
            term = &term * &gauss[((m * pj as u64) % n1) as usize];
        }
        for &qk in &gv.qlist {
            term = &term * &gauss[((n1 - (m * qk as u64) % n1) % n1) as usize];
        }
        let sm = gv.s(m as i64, q);
        let scale = Real::from_bigint(&BigInt::from(q).pow(sm as u32), w);
        term = &term.scale(&scale) * &unit(m * log_arg);
        total = &total + &term;
    }
    // X = H q^s0 (q-1) = -(-1)^(r+s) sum_m q^s(m) prod g(..) omega^m(..), an integer
    let rs = gv.plist.len() + gv.qlist.len();
    let x = if rs % 2 == 0 { -total } else { total };
    let nearest = x.re.round();
    let dist_re = (&x.re - &Real::from_bigint(&nearest, w)).abs().to_f64();
    let dist_im = x.im.abs().to_f64();
    let dist = dist_re.max(dist_im);
    let qf = q as f64;
    let eps_g = qf * 2f64.powi(-(prec as i32) + 8);
    let bound = (qf - 1.0) * qf.powi(s0 as i32) * (rs as f64 + 2.0) * qf.powf(rs as f64 / 2.0) * (eps_g + 2f64.powi(-(prec as i32) + 4));
    if dist >= 0.25 || bound >= 0.1 {
        return Err(CharSumError::RoundingUnsafe { distance: dist, bound });
    }
    let den = BigInt::from(q).pow(s0 as u32) * BigInt::from(n1);
    let value = BigRational::new(nearest, den);
    // the denominator must be a power of q
    let mut d = value.denom().clone();
    while (&d % BigInt::from(q)).is_zero() {
        d /= BigInt::from(q);
    }
    if !d.is_one() {
        return Err(CharSumError::NotRational);
    }
    Ok(HValue { value, error_bound: Some(bound), rounding_distance: Some(dist), precision_used: Some(prec) })
}

/// Rational value of `H * q^k` as an integer, if it is one.
pub fn times_q_power(h: &BigRational, q: u64, k: u32) -> Option<BigInt> {
    let v = h * BigRational::from_integer(BigInt::from(q).pow(k));
    if v.is_integer() {
        Some(v.to_integer())
    } else {
        None
    }
}
