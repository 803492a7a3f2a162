use std::sync::Mutex;

use num_bigint::BigInt;
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::numeric::{cos_sin, exp, ln, pi, Real};

use super::series::pochhammer;
use super::SeriesError;

static BERNOULLI: Mutex<Vec<BigRational>> = Mutex::new(Vec::new());

/// Bernoulli number `B_n` (with `B_1 = -1/2`), cached.
pub fn bernoulli(n: usize) -> BigRational {
    let mut cache = BERNOULLI.lock().unwrap();
    while cache.len() <= n {
        let m = cache.len();
        if m == 0 {
            cache.push(BigRational::one());
            continue;
        }
        // sum_(j=0)^m C(m+1, j) B_j = 0
        let mut s = BigRational::zero();
        for (j, bj) in cache.iter().enumerate() {
            s += bj * BigRational::from_integer(binomial(BigInt::from(m + 1), BigInt::from(j)));
        }
        let b = -s / BigRational::from_integer(BigInt::from(m + 1));
        cache.push(b);
    }
    cache[n].clone()
}

fn stirling_remainder_log2(m: usize, y: f64) -> f64 {
    // |R| <= |B_(2m+2)| / ((2m+2)(2m+1) y^(2m+1))
    let b = bernoulli(2 * m + 2);
    let bl = b.numer().abs().to_f64().map(f64::log2).unwrap_or_else(|| b.numer().bits() as f64)
        - b.denom().to_f64().map(f64::log2).unwrap_or_else(|| b.denom().bits() as f64 - 1.0);
    bl - ((2 * m + 2) as f64 * (2 * m + 1) as f64).log2() - (2 * m + 1) as f64 * y.log2()
}

/// `ln Gamma(x)` for rational `x > 0`. Shifts to `y = x + N` large enough for the
/// truncated Stirling series to reach `2^-(precision + 8)`, then divides by `(x)_N` exactly.
pub fn ln_gamma(x: &BigRational, precision: u32) -> Result<Real, SeriesError> {
    if !x.is_positive() {
        return Err(SeriesError::GammaPole(x.to_string()));
    }
    let w = precision + 32;
    let target = -(precision as f64) - 8.0;
    let m = (precision as usize) / 6 + 6;
    let xf = x.to_f64().unwrap();
    let mut n = 0usize;
    while stirling_remainder_log2(m, xf + n as f64) > target {
        n += 8;
    }
    let y = x + BigRational::from_integer(BigInt::from(n));
    let yr = Real::from_ratio(&y, w);
    let ly = ln(&yr);
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    let mut acc = Real::from_ratio(&(&y - &half), w).mul(&ly).sub(&yr);
    acc = acc.add(&ln(&pi(w).ldexp(1)).ldexp(-1));
    let inv_y = Real::one(w).div(&yr);
    let inv_y2 = inv_y.square();
    let mut pw = inv_y;
    for k in 1..=m {
        let c = bernoulli(2 * k) / BigRational::from_integer(BigInt::from((2 * k) * (2 * k - 1)));
        acc = acc.add(&Real::from_ratio(&c, w).mul(&pw));
        pw = pw.mul(&inv_y2);
    }
    if n > 0 {
        let p = pochhammer(x, n);
        acc = acc.sub(&ln(&Real::from_ratio(&p, w)));
    }
    Ok(acc.with_prec(precision))
}

/// `Gamma(x)` for rational `x` away from the poles; reflection for `x <= 0`.
/// Relative error below `2^-(precision - 4)`.
pub fn gamma(x: &BigRational, precision: u32) -> Result<Real, SeriesError> {
    let w = precision + 32;
    if x.is_positive() {
        return Ok(exp(&ln_gamma(x, w)?).with_prec(precision));
    }
    if x.is_integer() {
        return Err(SeriesError::GammaPole(x.to_string()));
    }
    // Gamma(x) = pi / (sin(pi x) Gamma(1 - x))
    let one_minus = BigRational::one() - x;
    let g = exp(&ln_gamma(&one_minus, w)?);
    let (_, s) = cos_sin(&pi(w).mul(&Real::from_ratio(x, w)));
    Ok(pi(w).div(&s.mul(&g)).with_prec(precision))
}

/// `prod Gamma(num_i) / prod Gamma(den_j)`.
pub fn gamma_ratio(num: &[BigRational], den: &[BigRational], precision: u32) -> Result<Real, SeriesError> {
    let w = precision + 16;
    let mut acc = Real::one(w);
    for x in num {
        acc = acc.mul(&gamma(x, w)?);
    }
    for x in den {
        acc = acc.div(&gamma(x, w)?);
    }
    Ok(acc.with_prec(precision))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn bernoulli_values() {
        assert_eq!(bernoulli(1), r(-1, 2));
        assert_eq!(bernoulli(2), r(1, 6));
        assert_eq!(bernoulli(12), r(-691, 2730));
        assert!(bernoulli(13).is_zero());
    }

    #[test]
    fn gamma_reference_values() {
        // independent decimal references
        let cases = [
            (r(1, 3), "2.678938534707747633655692940974677644129"),
            (r(7, 5), "0.8872638175030752892236216087630717803082"),
        ];
        for (x, want) in cases {
            let g = gamma(&x, 160).unwrap().to_decimal(38);
            assert_eq!(&g[..38], &want[..38], "Gamma({x})");
        }
        // Gamma(1/2)^2 = pi
        let g = gamma(&r(1, 2), 256).unwrap();
        let d = g.square().sub(&pi(256)).abs();
        assert!(d.magnitude() < -245);
        // Gamma(5) = 24, Gamma(-1/2) = -2 sqrt(pi)
        assert!(gamma(&r(5, 1), 128).unwrap().sub(&Real::from_i64(24, 128)).abs().magnitude() < -115);
        let m = gamma(&r(-1, 2), 128).unwrap().add(&pi(128).sqrt().ldexp(1)).abs();
        assert!(m.magnitude() < -115);
        assert!(gamma(&r(-3, 1), 64).is_err());
    }
}
