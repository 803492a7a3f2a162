use std::collections::HashMap;

use crate::ff_core::{binomial_ff, jacobi_sum, mod_inverse, CharIndex, CycInt, FfError, FiniteFieldTable, GroupRing};
use crate::hg_datum::{HGDatum, Rational};

use super::CharSumError;

/// Upper limit on `(n-1) q^2 L` for the tabulated recursion.
pub const RECURSION_BUDGET: u64 = 6_000_000_000;

/// `P(A_1, ..., A_n; B_2, ..., B_n; lambda)` for every `lambda` in `F_q`, indexed by
/// the field encoding, with values in `Z[zeta_L]`.
///
/// Builds the nested sum level by level: starting from `A_1-bar(1 - lambda)`, each
/// level replaces the table `T` by `lambda -> sum_x A(x) (A-bar B)(1 - x) T(lambda x)`.
/// Entries are accumulated in the group ring `Z[C_L]`, so each level costs `q^2 L`
/// integer additions. Every character must satisfy `(q-1) | k L`.
pub fn period_table(
    field: &FiniteFieldTable,
    a: &[CharIndex],
    b: &[CharIndex],
    l: u32,
) -> Result<Vec<CycInt>, CharSumError> {
    if a.is_empty() || b.len() + 1 != a.len() {
        return Err(CharSumError::BadCharacterList);
    }
    let q = field.q() as usize;
    let n1 = q as u64 - 1;
    for c in a.iter().chain(b) {
        if (c.0 * l as u64) % n1 != 0 {
            return Err(FfError::OrderMismatch.into());
        }
    }
    let cost = (a.len() as u64 - 1) * (q as u64) * (q as u64) * l as u64;
    if cost > RECURSION_BUDGET {
        return Err(CharSumError::FieldTooLargeForRecursion { q: field.q(), n: a.len() });
    }
    let lu = l as usize;
    let exp_of = |c: CharIndex, x: u32| -> Option<usize> { c.exponent(field, x, l).map(|e| e as usize) };
    let mut table = vec![0i64; q * lu];
    let a1bar = a[0].inv(field);
    for lam in 0..field.q() {
        if let Some(e) = exp_of(a1bar, field.one_minus(lam)) {
            table[lam as usize * lu + e] = 1;
        }
    }
    let logs: Vec<usize> = (1..field.q()).map(|x| field.dlog(x).unwrap() as usize).collect();
    for (ai, bi) in a[1..].iter().zip(b) {
        let abar_b = ai.inv(field).mul(*bi, field);
        // weight exponent for every x not in {0, 1}
        let weights: Vec<(usize, usize)> = (1..field.q())
            .filter_map(|x| {
                let y = field.one_minus(x);
                let w = (exp_of(*ai, x)? + exp_of(abar_b, y)?) % lu;
                Some((logs[x as usize - 1], w))
            })
            .collect();
        let mut next = vec![0i64; q * lu];
        // lambda = 0
        for &(_, w) in &weights {
            rotate_add(&mut next[..lu], &table[..lu], w);
        }
        for lam in 1..field.q() {
            let ll = logs[lam as usize - 1];
            let dst = lam as usize * lu;
            let out = &mut next[dst..dst + lu];
            for &(lx, w) in &weights {
                let idx = field.gen_pow((ll + lx) as u64) as usize;
                rotate_add(out, &table[idx * lu..idx * lu + lu], w);
            }
        }
        table = next;
    }
    Ok((0..q)
        .map(|lam| {
            let mut g = GroupRing::new(l);
            for (j, &v) in table[lam * lu..lam * lu + lu].iter().enumerate() {
                if v != 0 {
                    g.add_at(j as i64, v as i128);
                }
            }
            g.to_cyc()
        })
        .collect())
}

#[inline]
fn rotate_add(out: &mut [i64], src: &[i64], w: usize) {
    let l = out.len();
    let (head, tail) = out.split_at_mut(w);
    for (o, s) in tail.iter_mut().zip(&src[..l - w]) {
        *o = o.checked_add(*s).expect("period table overflow");
    }
    for (o, s) in head.iter_mut().zip(&src[l - w..]) {
        *o = o.checked_add(*s).expect("period table overflow");
    }
}

/// Characters `omega^((q-1) a_i)` and `omega^((q-1) b_i)` (`i >= 2`) of a datum for
/// `omega = omega_0^u`, where `omega_0(g) = zeta_(q-1)`.
pub fn datum_characters(
    datum: &HGDatum,
    field: &FiniteFieldTable,
    u: i64,
) -> Result<(Vec<CharIndex>, Vec<CharIndex>), CharSumError> {
    if (field.q() - 1) % datum.lcd() != 0 {
        return Err(FfError::OrderMismatch.into());
    }
    let conv = |x: &Rational| CharIndex::from_fraction(*x, u, field);
    let a = datum.alpha().iter().map(conv).collect::<Result<Vec<_>, _>>()?;
    let b = datum.beta()[1..].iter().map(conv).collect::<Result<Vec<_>, _>>()?;
    Ok((a, b))
}

fn omega_exponent(field: &FiniteFieldTable, omega: CharIndex) -> Result<i64, CharSumError> {
    let n = field.q() as i64 - 1;
    if mod_inverse(omega.0 as i64, n).is_none() {
        return Err(CharSumError::NotAGenerator);
    }
    Ok(omega.0 as i64)
}

/// `lambda` reduced into the field; fails when `p` divides its numerator or denominator.
pub fn lambda_in_field(lambda: Rational, field: &FiniteFieldTable) -> Result<u32, CharSumError> {
    let x = field.from_ratio(*lambda.numer(), *lambda.denom()).ok_or(CharSumError::BadReduction)?;
    if x == 0 {
        return Err(CharSumError::BadReduction);
    }
    Ok(x)
}

/// `P(alpha, beta; lambda; F_q; omega)` by the nested-sum recursion, in `Z[zeta_M]`.
pub fn p_recursive(
    datum: &HGDatum,
    lambda: u32,
    field: &FiniteFieldTable,
    omega: CharIndex,
) -> Result<CycInt, CharSumError> {
    let u = omega_exponent(field, omega)?;
    let (a, b) = datum_characters(datum, field, u)?;
    Ok(period_table(field, &a, &b, datum.lcd())?.swap_remove(lambda as usize))
}

/// Binomial coefficients `(A over B)` in `Z[zeta_(q-1)]`, memoized.
pub struct BinomialCache<'a> {
    field: &'a FiniteFieldTable,
    memo: HashMap<(u64, u64), CycInt>,
}

impl<'a> BinomialCache<'a> {
    pub fn new(field: &'a FiniteFieldTable) -> Self {
        BinomialCache { field, memo: HashMap::new() }
    }

    pub fn get(&mut self, a: CharIndex, b: CharIndex) -> CycInt {
        let f = self.field;
        self.memo
            .entry((a.0, b.0))
            .or_insert_with(|| binomial_ff(f, a, b, f.q() - 1).expect("order divides q-1"))
            .clone()
    }
}

/// The binomial-coefficient form of `P`: a single sum over all `q - 1` characters
/// of products of `n` binomials, plus the `delta(lambda)` term. Values in `Z[zeta_(q-1)]`.
pub fn p_spectral_chars(
    field: &FiniteFieldTable,
    a: &[CharIndex],
    b: &[CharIndex],
    lambda: u32,
    cache: &mut BinomialCache,
) -> Result<CycInt, CharSumError> {
    if a.is_empty() || b.len() + 1 != a.len() {
        return Err(CharSumError::BadCharacterList);
    }
    let l = field.q() - 1;
    if lambda == 0 {
        let mut acc = CycInt::one(l);
        for (ai, bi) in a[1..].iter().zip(b) {
            acc = &acc * &jacobi_sum(field, *ai, ai.inv(field).mul(*bi, field), l)?;
        }
        return Ok(acc);
    }
    let loglam = field.dlog(lambda).unwrap() as i64;
    let mut total = CycInt::zero(l);
    for k in 0..l as u64 {
        let chi = CharIndex(k);
        let mut prod = cache.get(a[0].mul(chi, field), chi);
        for (ai, bi) in a[1..].iter().zip(b) {
            if prod.is_zero() {
                break;
            }
            prod = &prod * &cache.get(ai.mul(chi, field), bi.mul(chi, field));
        }
        total = &total + &prod.mul_zeta(k as i64 * loglam);
    }
    let mut sign: i128 = if a.len() % 2 == 0 { 1 } else { -1 };
    for (ai, bi) in a[1..].iter().zip(b) {
        sign *= ai.mul(*bi, field).sign_at_minus_one(field);
    }
    let d = l as i128;
    if total.coeffs().iter().any(|c| c % d != 0) {
        return Err(CharSumError::Inexact);
    }
    let coeffs = total.coeffs().iter().map(|c| sign * (c / d)).collect();
    Ok(CycInt::from_coeffs(l, coeffs))
}

/// `P(alpha, beta; lambda; F_q; omega)` through [`p_spectral_chars`], mapped back to `Z[zeta_M]`.
pub fn p_spectral(
    datum: &HGDatum,
    lambda: u32,
    field: &FiniteFieldTable,
    omega: CharIndex,
) -> Result<CycInt, CharSumError> {
    let u = omega_exponent(field, omega)?;
    let (a, b) = datum_characters(datum, field, u)?;
    let mut cache = BinomialCache::new(field);
    let v = p_spectral_chars(field, &a, &b, lambda, &mut cache)?;
    v.descend(datum.lcd()).ok_or(CharSumError::Inexact)
}

/// Generators `omega = omega_0^u` with `omega(z) = zeta_M^(-1)` for `z = g^((q-1)/M)`,
/// i.e. `u = -1 mod M` and `u` a unit mod `q - 1`. Returns up to `count` of them,
/// starting with `u = q - 2`.
pub fn admissible_omegas(field: &FiniteFieldTable, m: u32, count: usize) -> Vec<CharIndex> {
    let n = field.q() as u64 - 1;
    let mut out = vec![CharIndex(n - 1)];
    let mut u = m as u64 - 1;
    while u < n && out.len() < count {
        if u != n - 1 && num_integer::gcd(u, n) == 1 {
            out.push(CharIndex(u));
        }
        u += m as u64;
    }
    out
}

/// `P` with the normalization `omega(zeta_M mod p) = zeta_M^(-1)`; evaluated with two
/// admissible generators when available and required to agree.
pub fn p_normalized(datum: &HGDatum, lambda: u32, field: &FiniteFieldTable) -> Result<CycInt, CharSumError> {
    let m = datum.lcd();
    if (field.q() - 1) % m != 0 {
        return Err(CharSumError::NoOrderMElement { q: field.q(), m });
    }
    let omegas = admissible_omegas(field, m, 2);
    let first = p_recursive(datum, lambda, field, omegas[0])?;
    for &w in &omegas[1..] {
        if p_recursive(datum, lambda, field, w)? != first {
            return Err(CharSumError::OmegaDependence);
        }
    }
    Ok(first)
}

/// All normalized values `lambda -> P(alpha, beta; lambda)` at once.
pub fn p_normalized_table(datum: &HGDatum, field: &FiniteFieldTable) -> Result<Vec<CycInt>, CharSumError> {
    let m = datum.lcd();
    if (field.q() - 1) % m != 0 {
        return Err(CharSumError::NoOrderMElement { q: field.q(), m });
    }
    let (a, b) = datum_characters(datum, field, -1)?;
    period_table(field, &a, &b, m)
}

/// `J(alpha, beta) = prod_(i >= 2) A_i(-1) J(A_i, B_i-bar)` with its decomposition
/// `(-1)^(m-1) chi q^((n-m)/2)`.
#[derive(Clone, Debug)]
pub struct JacobiFactor {
    pub value: CycInt,
    /// number of integral entries of beta
    pub m: usize,
    /// `chi`, when `n - m` is even
    pub chi: Option<CycInt>,
}

pub fn jacobi_factor(datum: &HGDatum, field: &FiniteFieldTable, omega: CharIndex) -> Result<JacobiFactor, CharSumError> {
    let u = omega_exponent(field, omega)?;
    let (a, b) = datum_characters(datum, field, u)?;
    let m = datum.lcd();
    let mut value = CycInt::one(m);
    for (ai, bi) in a[1..].iter().zip(&b) {
        let j = jacobi_sum(field, *ai, bi.inv(field), m)?;
        value = (&value * &j).scale(ai.sign_at_minus_one(field));
    }
    let n = datum.n();
    let mi = datum.integral_beta_count();
    let chi = if (n - mi) % 2 == 0 {
        let d = (field.q() as i128).pow(((n - mi) / 2) as u32) * if mi % 2 == 1 { 1 } else { -1 };
        if value.coeffs().iter().all(|c| c % d == 0) {
            Some(CycInt::from_coeffs(m, value.coeffs().iter().map(|c| c / d).collect()))
        } else {
            None
        }
    } else {
        None
    };
    Ok(JacobiFactor { value, m: mi, chi })
}
