use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::numeric::Real;

use super::series::SeriesSpec;
use super::SeriesError;

/// A value with a rigorous absolute error bound `2^error_log2`.
#[derive(Clone, Debug)]
pub struct SeriesValue {
    pub value: Real,
    /// `log2` of the error bound; `-inf` for exact sums
    pub error_log2: f64,
    /// number of series terms summed explicitly
    pub terms: usize,
    /// order of the tail correction
    pub tail_order: usize,
}

impl SeriesValue {
    pub fn error_bound(&self) -> f64 {
        self.error_log2.exp2()
    }
}

type Poly = Vec<BigRational>;

fn q(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

fn pmul(a: &Poly, b: &Poly) -> Poly {
    let mut c = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            c[i + j] += x * y;
        }
    }
    c
}

fn padd(a: &Poly, b: &Poly, s: &BigRational) -> Poly {
    let mut c = a.clone();
    if c.len() < b.len() {
        c.resize(b.len(), BigRational::zero());
    }
    for (i, y) in b.iter().enumerate() {
        c[i] += y * s;
    }
    c
}

fn shift(a: &Poly, k: usize) -> Poly {
    let mut c = vec![BigRational::zero(); k];
    c.extend(a.iter().cloned());
    c
}

fn one_plus_pow(j: usize) -> Poly {
    let mut p = vec![BigRational::one()];
    for _ in 0..j {
        p = pmul(&p, &vec![BigRational::one(), BigRational::one()]);
    }
    p
}

fn coef(p: &Poly, i: usize) -> BigRational {
    p.get(i).cloned().unwrap_or_else(BigRational::zero)
}

/// Telescoping tail `t_k g(k)` with `g(k) = d_(-1) k + sum_(j=0)^J d_j k^(-j)` chosen so that
/// `eps(k) = 1 - g(k) + r(k) g(k+1) = k^(-(J+2)) P(1/k) / ((1 + 1/k)^J prod(1 + b_i/k))`.
struct TailModel {
    d: Vec<BigRational>,
    /// coefficients of `P`
    p: Vec<f64>,
    order: usize,
    b_min: f64,
}

impl TailModel {
    fn build(a: &[BigRational], b: &[BigRational], j: usize) -> Option<TailModel> {
        let one = BigRational::one();
        let pa = a.iter().fold(vec![one.clone()], |acc, x| pmul(&acc, &vec![one.clone(), x.clone()]));
        let pb = b.iter().fold(vec![one.clone()], |acc, x| pmul(&acc, &vec![one.clone(), x.clone()]));
        let base = pmul(&one_plus_pow(j), &pb);
        let n_const = shift(&base, 1);
        let mut basis = Vec::with_capacity(j + 2);
        // d_(-1)
        basis.push(padd(&pmul(&pa, &one_plus_pow(j + 1)), &base, &q(-1)));
        for i in 0..=j {
            let lhs = shift(&base, i + 1);
            let rhs = shift(&pmul(&pa, &one_plus_pow(j - i)), i + 1);
            basis.push(padd(&rhs, &lhs, &q(-1)));
        }
        // equation at u^i fixes unknown i - 1 (index into basis)
        let mut d = vec![BigRational::zero(); j + 2];
        for i in 1..=j + 2 {
            let unknown = i - 1;
            let mut rest = coef(&n_const, i);
            for (m, dm) in d.iter().enumerate().take(unknown) {
                rest += dm * coef(&basis[m], i);
            }
            let c = coef(&basis[unknown], i);
            if c.is_zero() {
                return None;
            }
            d[unknown] = -rest / c;
        }
        let mut num = n_const;
        for (m, dm) in d.iter().enumerate() {
            num = padd(&num, &basis[m], dm);
        }
        let order = j + 2;
        if num.iter().take(order + 1).any(|c| !c.is_zero()) {
            return None;
        }
        let p = num[order + 1..].iter().map(|c| c.to_f64().unwrap_or(f64::INFINITY).abs()).collect();
        let b_min = b.iter().map(|x| x.to_f64().unwrap()).fold(0.0, f64::min);
        Some(TailModel { d, p, order, b_min })
    }

    /// `log2` of `sup_(k >= K) |eps(k)| k^order`, or `None` when `K` is too small to bound it.
    fn eps_log2(&self, k: f64, nb: usize) -> Option<f64> {
        let u = 1.0 / k;
        let mut num = 0.0;
        let mut pw = 1.0;
        for c in &self.p {
            num += c * pw;
            pw *= u;
        }
        let den_factor = 1.0 + self.b_min * u;
        if den_factor <= 0.0 {
            return None;
        }
        let den = den_factor.powi(nb as i32);
        Some((num / den).log2() + 1e-9)
    }

    /// `log2` of the bound on `sum_(k >= K) |t_k eps(k)|` given `log2 |t_K|`.
    fn remainder_log2(&self, k: f64, t_log2: f64, nb: usize) -> Option<f64> {
        let e = self.eps_log2(k, nb)?;
        let t = self.order as f64;
        // sum_(k >= K) k^(-T) <= K^(-T) + K^(1-T) / (T - 1)
        let s = (-t * k.log2()).exp2() + ((1.0 - t) * k.log2()).exp2() / (t - 1.0);
        Some(t_log2 + e + s.log2() + 1e-6)
    }

    fn g_at(&self, k: usize, w: u32) -> Real {
        let kk = Real::from_i64(k as i64, w);
        let mut acc = Real::from_ratio(&self.d[0], w).mul(&kk);
        let inv = Real::one(w).div(&kk);
        let mut pw = Real::one(w);
        for dj in &self.d[1..] {
            acc = acc.add(&Real::from_ratio(dj, w).mul(&pw));
            pw = pw.mul(&inv);
        }
        acc
    }
}

/// `true` when `0 <= r(k) < 1` for every `k >= k0`, shown by Taylor-shifting the
/// numerator and the gap to `k0` and checking signs of the coefficients.
fn ratio_monotone_from(a: &[BigRational], b: &[BigRational], k0: usize) -> bool {
    let one = BigRational::one();
    let k = q(k0 as i64);
    let pa = a.iter().fold(vec![one.clone()], |acc, x| pmul(&acc, &vec![x + &k, one.clone()]));
    let pb = b.iter().fold(vec![one.clone()], |acc, x| pmul(&acc, &vec![x + &k, one.clone()]));
    let gap = padd(&pb, &pa, &q(-1));
    pa.iter().all(|c| !c.is_negative())
        && gap.iter().all(|c| !c.is_negative())
        && gap.first().map(|c| c.is_positive()).unwrap_or(false)
}

/// Value of a convergent `pFq` at `z = 1` with an error bound below `2^-precision`.
pub fn hgs_value_at_1(spec: &SeriesSpec, precision: u32) -> Result<SeriesValue, SeriesError> {
    let w = precision + 64;
    if spec.terminates_at().is_some() {
        let v = spec.terminating_sum(&BigRational::one())?;
        return Ok(SeriesValue {
            value: Real::from_ratio(&v, precision),
            error_log2: f64::NEG_INFINITY,
            terms: spec.terminates_at().unwrap() + 1,
            tail_order: 0,
        });
    }
    let mut b = spec.lower.clone();
    b.push(BigRational::one());
    let a = &spec.upper;
    if a.len() > b.len() {
        return Err(SeriesError::NotConvergent("more upper than lower parameters".into()));
    }
    if a.len() < b.len() {
        return sum_fast_decay(spec, precision);
    }
    let sigma = spec.sigma();
    if sigma <= BigRational::one() {
        return Err(SeriesError::NotConvergent(sigma.to_string()));
    }
    let target = -(precision as f64) - 2.0;
    let nb = b.len();
    // log2 |t_k| in floating point for planning
    let max_k = 1usize << 22;
    let af: Vec<f64> = a.iter().map(|x| x.to_f64().unwrap()).collect();
    let bf: Vec<f64> = b.iter().map(|x| x.to_f64().unwrap()).collect();
    let log_t = |k_end: usize, cache: &mut Vec<f64>| {
        while cache.len() <= k_end {
            let k = (cache.len() - 1) as f64;
            let mut r = 0.0;
            for x in &af {
                r += (x + k).abs().log2();
            }
            for x in &bf {
                r -= (x + k).abs().log2();
            }
            let last = *cache.last().unwrap();
            cache.push(last + r);
        }
        cache[k_end]
    };
    let mut cache = vec![0.0f64];
    let mut best: Option<(usize, TailModel)> = None;
    for j in [8usize, 16, 32, 48, 64] {
        let Some(model) = TailModel::build(a, &b, j) else { continue };
        let mut k = 32usize;
        let mut found = None;
        while k <= max_k {
            let t = log_t(k, &mut cache);
            if let Some(r) = model.remainder_log2(k as f64, t, nb) {
                if r < target - 8.0 && ratio_monotone_from(a, &b, k) {
                    found = Some(k);
                    break;
                }
            }
            k *= 2;
        }
        if let Some(k) = found {
            let cost = k + j * j;
            if best.as_ref().map(|(bk, bm)| cost < *bk + bm.order * bm.order).unwrap_or(true) {
                best = Some((k, model));
            }
        }
    }
    let (k_cut, model) = best.ok_or(SeriesError::PrecisionUnreachable)?;
    // partial sum in working precision
    let mut t = Real::one(w);
    let mut sum = Real::zero(w);
    let mut abs_sum = 0.0f64;
    for k in 0..k_cut {
        sum = sum.add(&t);
        abs_sum += t.abs().to_f64();
        t = t.mul(&Real::from_ratio(&spec.ratio(k)?, w));
    }
    let tail = t.mul(&model.g_at(k_cut, w));
    sum = sum.add(&tail);
    // rounding: each term carries at most 2(k+1) roundings of relative size 2^-w
    let rounding = ((3 * (k_cut + model.order + 4)) as f64 * (abs_sum + tail.abs().to_f64())).log2() - w as f64;
    let t_log2 = t.abs().to_f64().log2() + 1e-9;
    let rem = model.remainder_log2(k_cut as f64, t_log2, nb).ok_or(SeriesError::PrecisionUnreachable)?;
    let err = log2_add(rem, rounding) + 1e-9;
    if err > -(precision as f64) {
        return Err(SeriesError::PrecisionUnreachable);
    }
    Ok(SeriesValue { error_log2: log2_add(err, half_ulp_log2(&sum, precision)), value: sum.with_prec(precision), terms: k_cut, tail_order: model.order })
}

fn log2_add(a: f64, b: f64) -> f64 {
    let m = a.max(b);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + ((a - m).exp2() + (b - m).exp2()).log2()
}

/// Series with more lower than upper parameters: terms decay factorially and the tail is
/// bounded geometrically once the ratio is below `1/2`.
fn sum_fast_decay(spec: &SeriesSpec, precision: u32) -> Result<SeriesValue, SeriesError> {
    let w = precision + 64;
    let mut t = Real::one(w);
    let mut sum = Real::zero(w);
    let mut abs_sum = 0.0;
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    for k in 0..1_000_000usize {
        sum = sum.add(&t);
        abs_sum += t.abs().to_f64();
        let r = spec.ratio(k)?;
        t = t.mul(&Real::from_ratio(&r, w));
        // past the largest parameter the ratio is decreasing in k
        let big_enough = spec.upper.iter().chain(&spec.lower).all(|x| x.abs() < q(k as i64));
        if big_enough && r.abs() <= half {
            let tail = t.abs().to_f64().log2() + 1.0;
            if tail < -(precision as f64) - 2.0 {
                let rounding = ((3 * (k + 2)) as f64 * abs_sum).log2() - w as f64;
                return Ok(SeriesValue {
                    error_log2: log2_add(log2_add(tail, rounding), half_ulp_log2(&sum, precision)),
                    value: sum.with_prec(precision),
                    terms: k + 1,
                    tail_order: 0,
                });
            }
        }
    }
    Err(SeriesError::PrecisionUnreachable)
}

/// Error from rounding the final sum to `precision` bits.
fn half_ulp_log2(sum: &Real, precision: u32) -> f64 {
    if sum.is_zero() {
        f64::NEG_INFINITY
    } else {
        (sum.magnitude() - precision as i64 - 1) as f64
    }
}
