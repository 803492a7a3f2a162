use crate::numeric::{exp, pi, Real};

use super::ModularError;

/// `L(f, s)` with the discrepancy between two splittings of the Mellin integral.
#[derive(Clone, Debug)]
pub struct LValue {
    pub value: Real,
    pub split_discrepancy_log2: f64,
    pub terms: usize,
}

/// `Lambda(s)` split at `y = A`:
/// `sum a_n [c^s n^-s Gamma(s, nA/c) + eps c^(k-s) n^(s-k) Gamma(k-s, n/(Ac))]`, `c = sqrt(N)/(2 pi)`.
fn completed(an: &[i64], k: u32, s: u32, c: &Real, a: &Real, eps: i8, w: u32) -> Result<(Real, usize), ModularError> {
    let cf = c.to_f64();
    let af = a.to_f64();
    let rate = af.min(1.0 / af) / cf;
    // terms decay like n^k exp(-n rate)
    let mut n_max = 1usize;
    while (n_max as f64) * rate - (k as f64) * (n_max as f64).ln() < (w as f64 + 8.0) * std::f64::consts::LN_2 {
        n_max += 1;
    }
    if an.len() < n_max {
        return Err(ModularError::CoefficientUnavailable(format!("L-value needs {n_max} coefficients, {} available", an.len())));
    }
    let step1 = exp(&a.div(c).neg());
    let step2 = exp(&Real::one(w).div(&a.mul(c)).neg());
    let (mut e1, mut e2) = (Real::one(w), Real::one(w));
    let cs = c.powi(s as i64);
    let cks = c.powi((k - s) as i64);
    let mut total = Real::zero(w);
    for (i, &a_n) in an.iter().enumerate().take(n_max) {
        let n = (i + 1) as i64;
        e1 = e1.mul(&step1);
        e2 = e2.mul(&step2);
        if a_n == 0 {
            continue;
        }
        let x1 = Real::from_i64(n, w).mul(a).div(c);
        let x2 = Real::from_i64(n, w).div(&a.mul(c));
        let g1 = incomplete_gamma_int(s, &x1, &e1);
        let mut t = cs.mul(&g1).div(&Real::from_i64(n, w).powi(s as i64));
        if k > s {
            let g2 = incomplete_gamma_int(k - s, &x2, &e2);
            let t2 = cks.mul(&g2).mul(&Real::from_i64(n, w).powi(s as i64 - k as i64));
            t = if eps >= 0 { t.add(&t2) } else { t.sub(&t2) };
        }
        total = total.add(&t.mul_i64(a_n));
    }
    Ok((total, n_max))
}

/// `Gamma(m, x) = (m-1)! e^-x sum_{j<m} x^j / j!` with `e^-x` supplied.
fn incomplete_gamma_int(m: u32, x: &Real, emx: &Real) -> Real {
    let w = x.prec();
    let mut term = Real::one(w);
    let mut sum = Real::one(w);
    for j in 1..m as i64 {
        term = term.mul(x).div_i64(j);
        sum = sum.add(&term);
    }
    let fact: i64 = (1..m as i64).product();
    sum.mul(emx).mul_i64(fact)
}

/// `L(f, s)` for an integer `s` with `1 <= s < k` from `a_1, a_2, ...`, given the root number.
/// The value from the symmetric split is returned; a second split at `A = 6/5` must agree,
/// which fails when `fe_sign` is wrong.
pub fn l_value(an: &[i64], weight: u32, level: u32, s: u32, precision: u32, fe_sign: i8) -> Result<LValue, ModularError> {
    if s == 0 || s >= weight.max(1) && weight > 1 || fe_sign.abs() != 1 {
        return Err(ModularError::BadArgument(format!("s = {s}, weight {weight}, sign {fe_sign}")));
    }
    let w = precision + 32;
    let c = Real::from_i64(level as i64, w).sqrt().div(&pi(w).ldexp(1));
    let (l1, n1) = completed(an, weight, s, &c, &Real::one(w), fe_sign, w)?;
    let (l2, n2) = completed(an, weight, s, &c, &Real::from_frac(6, 5, w), fe_sign, w)?;
    let diff = l1.sub(&l2).abs();
    let rel = if diff.is_zero() { f64::NEG_INFINITY } else { (diff.magnitude() - l1.magnitude()) as f64 };
    if rel > -(precision as f64) + 8.0 {
        return Err(ModularError::FunctionalEquationMismatch { sign: fe_sign, discrepancy_log2: rel });
    }
    let gs: i64 = (1..s as i64).product();
    let value = l1.div(&c.powi(s as i64).mul_i64(gs)).with_prec(precision);
    Ok(LValue { value, split_discrepancy_log2: rel, terms: n1.max(n2) })
}

/// The root number consistent with the coefficients, found by trying both signs.
pub fn fe_sign_diagnostic(an: &[i64], weight: u32, level: u32, s: u32, precision: u32) -> Result<i8, ModularError> {
    let ok: Vec<i8> = [1i8, -1].into_iter().filter(|&e| l_value(an, weight, level, s, precision, e).is_ok()).collect();
    match ok.as_slice() {
        [e] => Ok(*e),
        _ => Err(ModularError::FunctionalEquationMismatch { sign: 0, discrepancy_log2: f64::NAN }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modular_forms::CoefficientProvider;

    #[test]
    fn wrong_sign_is_detected() {
        let f = CoefficientProvider::offline().handle("8.4.a.a", 400).unwrap();
        assert!(l_value(&f.an, 4, 8, 2, 96, 1).is_ok());
        assert!(matches!(l_value(&f.an, 4, 8, 2, 96, -1), Err(ModularError::FunctionalEquationMismatch { .. })));
        assert_eq!(fe_sign_diagnostic(&f.an, 4, 8, 2, 96).unwrap(), 1);
    }

    #[test]
    fn too_few_coefficients() {
        let f = CoefficientProvider::offline().handle("8.4.a.a", 10).unwrap();
        assert!(matches!(l_value(&f.an, 4, 8, 2, 96, 1), Err(ModularError::CoefficientUnavailable(_))));
        assert!(l_value(&f.an, 4, 8, 4, 96, 1).is_err());
    }
}
