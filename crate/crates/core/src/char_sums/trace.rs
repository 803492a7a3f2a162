use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::ff_core::FiniteFieldTable;
use crate::hg_datum::{EProfile, HGDatum, Rational};

use super::bcm::{h_value, HMethod};
use super::CharSumError;

/// Kronecker symbol `(d / n)` for odd `n > 0`.
pub fn kronecker(d: i64, n: u64) -> i64 {
    assert!(n % 2 == 1, "kronecker symbol needs odd modulus");
    let mut a = d.rem_euclid(n as i64) as u64;
    let mut n = n;
    let mut t = 1i64;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if n % 8 == 3 || n % 8 == 5 {
                t = -t;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            t = -t;
        }
        a %= n;
    }
    if n == 1 {
        t
    } else {
        0
    }
}

/// Sign `phi(M, a_1) chi(alpha, beta)` at `Frob_q` for a self-dual datum: the entries
/// pair up as `a, 1 - a` except the copies of `1/2`, each contributing `(-1/q)`.
pub fn self_dual_sign(datum: &HGDatum, q: u64) -> Result<i64, CharSumError> {
    if !datum.is_self_dual() {
        return Err(CharSumError::NotSelfDual);
    }
    let halves = datum.alpha_reduced().iter().filter(|&&a| a == Rational::new(1, 2)).count();
    let s = if q % 4 == 3 { -1 } else { 1 };
    Ok(if halves % 2 == 1 { s } else { 1 })
}

fn h_times_power(datum: &HGDatum, field: &FiniteFieldTable, precision: u32) -> Result<BigInt, CharSumError> {
    let n = datum.n();
    let m = datum.integral_beta_count();
    if (n - m) % 2 != 0 {
        return Err(CharSumError::NotSelfDual);
    }
    let inv_lambda = datum.lambda().recip();
    let h = h_value(datum, inv_lambda, field, HMethod::Direct { precision })?.value;
    let v = h * BigRational::from_integer(BigInt::from(field.q()).pow(((n - m) / 2) as u32));
    if !v.is_integer() {
        return Err(CharSumError::NotRational);
    }
    Ok(v.to_integer())
}

/// `phi chi H_q(alpha, beta; 1/lambda) q^((n-m)/2)` over `F_q`, `q = p^s`.
pub fn frobenius_trace_q(datum: &HGDatum, p: u32, s: u32, precision: u32) -> Result<BigInt, CharSumError> {
    if datum.lcd() % p == 0 || p == 2 {
        return Err(CharSumError::BadPrime(p));
    }
    if !datum.is_defined_over_q_as_multisets() {
        return Err(CharSumError::NotDefinedOverQ);
    }
    let field = FiniteFieldTable::build(p, s)?;
    let sign = self_dual_sign(datum, field.q() as u64)?;
    Ok(h_times_power(datum, &field, precision)? * sign)
}

/// Trace at `Frob_p`.
pub fn frobenius_trace(datum: &HGDatum, p: u32) -> Result<BigInt, CharSumError> {
    frobenius_trace_q(datum, p, 1, 192)
}

/// A one-dimensional Galois character `chi_d * eps^k`, trace `(d/p) p^k` at `Frob_p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OneDim {
    /// discriminant of the quadratic character; `1` for the trivial character
    pub disc: i64,
    pub power: u32,
}

impl OneDim {
    pub fn trace(&self, p: u64, s: u32) -> BigInt {
        let chi = kronecker(self.disc, p);
        BigInt::from(chi).pow(s) * BigInt::from(p).pow(self.power * s)
    }
}

/// Characteristic polynomial `1 - e_1 X + e_2 X^2 - ...` of Frobenius on the primitive part.
#[derive(Clone, Debug, PartialEq)]
pub struct EulerFactor {
    /// coefficients of `X^0, ..., X^d`
    pub coeffs: Vec<i128>,
    pub p: u32,
    pub twist: i64,
    pub degree: usize,
    /// quadratic factors over Z when the quartic splits
    pub factors: Vec<Vec<i128>>,
    /// `|reciprocal root|` expected from purity: `p^(w'/2)`
    pub expected_root_abs: f64,
    /// largest relative deviation of `|reciprocal root|` from the expected value
    pub max_root_deviation: f64,
}

pub fn format_poly(c: &[i128], var: &str) -> String {
    let mut parts = Vec::new();
    for (k, &v) in c.iter().enumerate().rev() {
        if v == 0 {
            continue;
        }
        let mag = v.abs();
        let body = match k {
            0 => format!("{mag}"),
            1 if mag == 1 => var.to_string(),
            1 => format!("{mag}*{var}"),
            _ if mag == 1 => format!("{var}^{k}"),
            _ => format!("{mag}*{var}^{k}"),
        };
        let sign = if v < 0 { "-" } else { "+" };
        if parts.is_empty() {
            parts.push(if v < 0 { format!("-{body}") } else { body });
        } else {
            parts.push(format!("{sign} {body}"));
        }
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" ")
    }
}

impl fmt::Display for EulerFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.len() > 1 {
            let fs: Vec<String> = self.factors.iter().map(|c| format!("({})", format_poly(c, "X"))).collect();
            write!(f, "{}", fs.join(" * "))
        } else {
            write!(f, "{}", format_poly(&self.coeffs, "X"))
        }
    }
}

fn isqrt(n: i128) -> Option<i128> {
    if n < 0 {
        return None;
    }
    let mut r = (n as f64).sqrt() as i128;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    Some(r)
}

/// Roots of a complex polynomial (coefficients low degree first) by Durand-Kerner.
fn poly_roots(c: &[f64]) -> Vec<(f64, f64)> {
    let d = c.len() - 1;
    let lead = c[d];
    let a: Vec<f64> = c.iter().map(|v| v / lead).collect();
    let mut z: Vec<(f64, f64)> = (0..d).map(|k| {
        let t = 0.4 + 0.9 * k as f64;
        let r = 1.0 + (k as f64) * 0.1;
        (r * t.cos(), r * t.sin())
    }).collect();
    let mul = |x: (f64, f64), y: (f64, f64)| (x.0 * y.0 - x.1 * y.1, x.0 * y.1 + x.1 * y.0);
    for _ in 0..2000 {
        let mut delta: f64 = 0.0;
        for i in 0..d {
            // monic polynomial by Horner
            let mut num = (a[d], 0.0);
            for k in (0..d).rev() {
                num = mul(num, z[i]);
                num.0 += a[k];
            }
            let mut den = (1.0, 0.0);
            for j in 0..d {
                if j != i {
                    den = mul(den, (z[i].0 - z[j].0, z[i].1 - z[j].1));
                }
            }
            let dd = den.0 * den.0 + den.1 * den.1;
            let step = ((num.0 * den.0 + num.1 * den.1) / dd, (num.1 * den.0 - num.0 * den.1) / dd);
            z[i] = (z[i].0 - step.0, z[i].1 - step.1);
            delta = delta.max(step.0.abs() + step.1.abs());
        }
        if delta < 1e-14 {
            break;
        }
    }
    z
}

/// Euler factor of the primitive part at `p` for a self-dual datum with `lambda = 1`.
///
/// The traces at `Frob_p` and `Frob_(p^2)` minus the given one-dimensional part,
/// scaled by the Tate twist, are the power sums `s_1, s_2`; the remaining
/// coefficients follow from `e_(d-j) = e_j p^(w'(d/2 - j))`, `w' = n - 1 + 2t`.
pub fn euler_factor_prim(datum: &HGDatum, p: u32, one_dim: Option<OneDim>, precision: u32) -> Result<EulerFactor, CharSumError> {
    if datum.lambda() != Rational::from_integer(1) {
        return Err(CharSumError::NeedsLambdaOne);
    }
    if !datum.is_primitive() || !datum.is_self_dual() {
        return Err(CharSumError::NotSelfDual);
    }
    let prof = EProfile::of(datum);
    let t = prof.twist.ok_or(CharSumError::NotDefinedOverQ)?;
    let n = datum.n() as i64;
    let d = 2 * ((datum.n() - 1) / 2);
    let wp = n - 1 + 2 * t;
    if wp < 0 {
        return Err(CharSumError::PowerSumInconsistent("negative motivic weight".into()));
    }
    let pp = BigInt::from(p);
    let mut power_sums = Vec::new();
    for s in 1..=2u32 {
        let tr = frobenius_trace_q(datum, p, s, precision)?;
        let rest = match one_dim {
            Some(od) => tr - od.trace(p as u64, s),
            None => tr,
        };
        // twist by p^(s t)
        let ps = pp.pow(s);
        let v = if t >= 0 {
            BigRational::from_integer(rest * ps.pow(t as u32))
        } else {
            BigRational::new(rest, ps.pow((-t) as u32))
        };
        if !v.is_integer() {
            return Err(CharSumError::PowerSumInconsistent(format!("twisted trace at p^{s} is not integral: {v}")));
        }
        power_sums.push(v.to_integer().to_i128().ok_or(CharSumError::Overflow)?);
    }
    let (s1, s2) = (power_sums[0], power_sums[1]);
    let pw = (p as i128).pow(wp as u32);
    let e1 = s1;
    if (s1 * s1 - s2) % 2 != 0 {
        return Err(CharSumError::PowerSumInconsistent("e_2 not integral".into()));
    }
    let e2 = (s1 * s1 - s2) / 2;
    let (coeffs, factors) = match d {
        0 => (vec![1], vec![]),
        2 => {
            if e2 != pw {
                return Err(CharSumError::PowerSumInconsistent(format!("e_2 = {e2}, expected {pw}")));
            }
            (vec![1, -e1, pw], vec![vec![1, -e1, pw]])
        }
        4 => {
            let c = vec![1, -e1, e2, -e1 * pw, pw * pw];
            // (1 - aX + P X^2)(1 - bX + P X^2): a + b = e1, ab = e2 - 2P
            let disc = e1 * e1 - 4 * (e2 - 2 * pw);
            let factors = match isqrt(disc) {
                Some(r) if (e1 + r) % 2 == 0 => {
                    let (a, b) = ((e1 + r) / 2, (e1 - r) / 2);
                    vec![vec![1, -a, pw], vec![1, -b, pw]]
                }
                _ => vec![c.clone()],
            };
            (c, factors)
        }
        _ => return Err(CharSumError::PowerSumInconsistent(format!("degree {d} needs more than two power sums"))),
    };
    let expected = (p as f64).powf(wp as f64 / 2.0);
    let mut dev: f64 = 0.0;
    if d > 0 {
        let cf: Vec<f64> = coeffs.iter().map(|&v| v as f64).collect();
        for (re, im) in poly_roots(&cf) {
            // reciprocal roots have modulus 1/|root|
            let r = 1.0 / (re * re + im * im).sqrt();
            dev = dev.max((r - expected).abs() / expected);
        }
    }
    Ok(EulerFactor { coeffs, p, twist: t, degree: d, factors, expected_root_abs: expected, max_root_deviation: dev })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kronecker_values() {
        assert_eq!(kronecker(-1, 7), -1);
        assert_eq!(kronecker(-1, 13), 1);
        assert_eq!(kronecker(3, 7), -1);
        assert_eq!(kronecker(3, 11), 1);
        assert_eq!(kronecker(-5, 7), 1);
        assert_eq!(kronecker(2, 7), 1);
        assert_eq!(kronecker(5, 5), 0);
    }

    #[test]
    fn poly_formatting() {
        assert_eq!(format_poly(&[1, 0, -88, 0, 2401], "X"), "2401*X^4 - 88*X^2 + 1");
        assert_eq!(format_poly(&[1, -8, 343], "X"), "343*X^2 - 8*X + 1");
    }

    #[test]
    fn durand_kerner_quadratic() {
        // 1 - 8X + 343X^2 has reciprocal roots of modulus sqrt(343)
        let r = poly_roots(&[1.0, -8.0, 343.0]);
        for (re, im) in r {
            let m = 1.0 / (re * re + im * im).sqrt();
            assert!((m - 343f64.sqrt()).abs() < 1e-9);
        }
    }
}
