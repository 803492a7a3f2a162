use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::numeric::{Complex, Real};

use super::PeriodError;

type Rule = Arc<Vec<(Real, Real)>>;

fn cache() -> &'static Mutex<HashMap<(usize, u32), Rule>> {
    static C: OnceLock<Mutex<HashMap<(usize, u32), Rule>>> = OnceLock::new();
    C.get_or_init(|| Mutex::new(HashMap::new()))
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: &Real) -> (Real, Real) {
    let w = x.prec();
    let mut p0 = Real::one(w);
    let mut p1 = x.clone();
    for k in 2..=n as i64 {
        let p2 = (x.mul(&p1).mul_i64(2 * k - 1) - p0.mul_i64(k - 1)).div_i64(k);
        p0 = p1;
        p1 = p2;
    }
    // (1 - x^2) P_n' = n (P_(n-1) - x P_n)
    let d = (p0 - x.mul(&p1)).mul_i64(n as i64).div(&(Real::one(w) - x.square()));
    (p1, d)
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`, nonnegative nodes only.
pub fn gauss_legendre(n: usize, prec: u32) -> Rule {
    if let Some(r) = cache().lock().unwrap().get(&(n, prec)) {
        return r.clone();
    }
    let w = prec + 16;
    let mut out = Vec::with_capacity(n.div_ceil(2));
    for i in 1..=n.div_ceil(2) {
        let guess = (std::f64::consts::PI * (i as f64 - 0.25) / (n as f64 + 0.5)).cos();
        let mut x = Real::from_f64(guess, w);
        for _ in 0..100 {
            let (p, d) = legendre(n, &x);
            let dx = p.div(&d);
            x = x - &dx;
            if dx.is_zero() || -dx.magnitude() > w as i64 - 4 {
                break;
            }
        }
        let (_, d) = legendre(n, &x);
        let weight = Real::from_i64(2, w).div(&(Real::one(w) - x.square()).mul(&d.square()));
        out.push((x.with_prec(prec), weight.with_prec(prec)));
    }
    let r = Arc::new(out);
    cache().lock().unwrap().insert((n, prec), r.clone());
    r
}

/// Fixed-order rule on the segment `a -> b`.
fn gl_fixed<F>(f: &F, a: &Complex, b: &Complex, n: usize, prec: u32) -> Result<Complex, PeriodError>
where
    F: Fn(&Complex) -> Result<Complex, PeriodError>,
{
    let mid = (a + b).ldexp(-1);
    let half = (b - a).ldexp(-1);
    let mut acc = Complex::zero(prec);
    for (x, wt) in gauss_legendre(n, prec).iter() {
        let off = half.scale(x);
        let mut s = f(&(&mid + &off))?;
        if !x.is_zero() {
            s = s + f(&(&mid - &off))?;
        }
        acc = acc + s.scale(wt);
    }
    Ok(&acc * &half)
}

/// An integral with its estimated absolute error `2^error_log2`.
#[derive(Clone, Debug)]
pub struct Integral {
    pub value: Complex,
    pub error_log2: f64,
    pub evaluations: usize,
    pub nodes: usize,
}

const MIN_NODES: usize = 16;
const MAX_NODES: usize = 512;
const MAX_SPLIT_DEPTH: u32 = 6;

/// Gauss-Legendre on `a -> b` with node doubling until two successive orders agree to
/// `2^(-precision + 12)`; segments that stall at the top order are bisected.
pub fn integrate_line<F>(f: &F, a: &Complex, b: &Complex, precision: u32) -> Result<Integral, PeriodError>
where
    F: Fn(&Complex) -> Result<Complex, PeriodError>,
{
    integrate_rec(f, a, b, precision, 0)
}

fn integrate_rec<F>(f: &F, a: &Complex, b: &Complex, precision: u32, depth: u32) -> Result<Integral, PeriodError>
where
    F: Fn(&Complex) -> Result<Complex, PeriodError>,
{
    let w = precision + 16;
    let tol = 12.0 - precision as f64;
    let mut n = MIN_NODES;
    let mut prev = gl_fixed(f, a, b, n, w)?;
    let mut evals = n;
    while n < MAX_NODES {
        n *= 2;
        let cur = gl_fixed(f, a, b, n, w)?;
        evals += n;
        let diff = (&cur - &prev).abs();
        let err = if diff.is_zero() { -(w as f64) } else { diff.magnitude() as f64 };
        if err <= tol {
            return Ok(Integral { value: cur.with_prec(precision), error_log2: err, evaluations: evals, nodes: n });
        }
        prev = cur;
    }
    if depth >= MAX_SPLIT_DEPTH {
        return Err(PeriodError::NoConvergence { nodes: n, depth });
    }
    let m = (a + b).ldexp(-1);
    let l = integrate_rec(f, a, &m, precision + 1, depth + 1)?;
    let r = integrate_rec(f, &m, b, precision + 1, depth + 1)?;
    Ok(combine(&[l, r], precision))
}

/// Sum of pieces; error bounds add.
pub(super) fn combine(parts: &[Integral], precision: u32) -> Integral {
    let mut v = Complex::zero(precision + 8);
    let mut err = 0.0f64;
    let (mut evals, mut nodes) = (0, 0);
    for p in parts {
        v = v + &p.value;
        err += p.error_log2.exp2();
        evals += p.evaluations;
        nodes = nodes.max(p.nodes);
    }
    Integral { value: v.with_prec(precision), error_log2: err.log2(), evaluations: evals, nodes }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::pi;

    #[test]
    fn nodes_integrate_polynomials() {
        let rule = gauss_legendre(8, 128);
        // exact for degree 15: int x^14 = 2/15
        let mut s = Real::zero(128);
        for (x, w) in rule.iter() {
            s = s + w.mul(&x.powi(14)).mul_i64(2);
        }
        let err = (s - Real::from_frac(2, 15, 128)).abs();
        assert!(err.is_zero() || err.magnitude() < -120);
        let total = rule.iter().fold(Real::zero(128), |acc, (x, w)| acc + if x.is_zero() { w.clone() } else { w.mul_i64(2) });
        assert!((total - Real::from_i64(2, 128)).abs().magnitude() < -120);
    }

    #[test]
    fn exponential_along_a_complex_segment() {
        let f = |z: &Complex| Ok(z.exp());
        let a = Complex::from_f64(0.0, 0.0, 128);
        let b = Complex::new(Real::zero(128), pi(128));
        let r = integrate_line(&f, &a, &b, 128).unwrap();
        // e^{i pi} - 1 = -2
        let err = (&r.value - &Complex::from_f64(-2.0, 0.0, 128)).abs();
        assert!(err.magnitude() < -110, "{err}");
        let back = integrate_line(&f, &b, &a, 128).unwrap();
        assert!((&back.value + &r.value).abs().magnitude() < -110);
    }
}
