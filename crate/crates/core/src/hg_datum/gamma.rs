use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow};

use super::{DatumError, HGDatum};

/// Exponents with `prod_j (X^(p_j) - 1) / prod_k (X^(q_k) - 1) = prod_i (X - e(a_i)) / (X - e(b_i))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaVector {
    pub plist: Vec<u32>,
    pub qlist: Vec<u32>,
    /// `N = (-1)^(sum q_k) prod p_j^(p_j) / prod q_k^(q_k)`
    pub n_const: BigRational,
}

fn mobius(n: u32) -> i64 {
    let mut n = n;
    let mut k = 0;
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            n /= d;
            if n % d == 0 {
                return 0;
            }
            k += 1;
        }
        d += 1;
    }
    if n > 1 {
        k += 1;
    }
    if k % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Multiplicity of each exact denominator `d` in the reduced multiset, provided
/// every primitive `d`-th root of unity occurs equally often.
fn cyclotomic_multiplicities(xs: &[super::Rational]) -> Option<BTreeMap<u32, i64>> {
    let mut count: BTreeMap<(i64, i64), i64> = BTreeMap::new();
    for &x in xs {
        let r = super::frac_part(x);
        *count.entry((*r.numer(), *r.denom())).or_default() += 1;
    }
    let mut out = BTreeMap::new();
    for (&(_, d), &c) in &count {
        let prev = out.insert(d as u32, c);
        if prev.is_some_and(|p| p != c) {
            return None;
        }
    }
    for (&d, &c) in &out {
        let units = (0..d as i64).filter(|k| num_integer::gcd(*k, d as i64) == 1).count();
        let present = count.keys().filter(|(_, dd)| *dd == d as i64).count();
        if present != units || c == 0 {
            return None;
        }
    }
    Some(out)
}

/// Exponent of each `X^e - 1` in `prod_d Phi_d^(mult_d)`.
fn binomial_exponents(mult: &BTreeMap<u32, i64>) -> BTreeMap<u32, i64> {
    let mut out: BTreeMap<u32, i64> = BTreeMap::new();
    for (&d, &c) in mult {
        for e in 1..=d {
            if d % e == 0 {
                let mu = mobius(d / e);
                if mu != 0 {
                    *out.entry(e).or_default() += mu * c;
                }
            }
        }
    }
    out.retain(|_, v| *v != 0);
    out
}

impl GammaVector {
    pub fn of(d: &HGDatum) -> Result<Self, DatumError> {
        if !d.is_defined_over_q_as_multisets() {
            return Err(DatumError::NotDefinedOverQ);
        }
        let ma = cyclotomic_multiplicities(d.alpha()).ok_or(DatumError::NotDefinedOverQ)?;
        let mb = cyclotomic_multiplicities(d.beta()).ok_or(DatumError::NotDefinedOverQ)?;
        let mut ea = binomial_exponents(&ma);
        for (e, v) in binomial_exponents(&mb) {
            *ea.entry(e).or_default() -= v;
        }
        let (mut plist, mut qlist) = (Vec::new(), Vec::new());
        for (&e, &v) in &ea {
            let target = if v > 0 { &mut plist } else { &mut qlist };
            for _ in 0..v.abs() {
                target.push(e);
            }
        }
        let mut n_const = BigRational::one();
        for &p in &plist {
            n_const *= BigRational::from_integer(BigInt::from(p).pow(p));
        }
        for &q in &qlist {
            n_const /= BigRational::from_integer(BigInt::from(q).pow(q));
        }
        if qlist.iter().map(|&q| q as u64).sum::<u64>() % 2 == 1 {
            n_const = -n_const;
        }
        Ok(GammaVector { plist, qlist, n_const })
    }

    /// `s(m) = min(#{j : (q-1) | m p_j}, #{k : (q-1) | m q_k})`.
    pub fn s(&self, m: i64, q: u64) -> usize {
        let n = q as i64 - 1;
        let cp = self.plist.iter().filter(|&&p| (m * p as i64).rem_euclid(n) == 0).count();
        let cq = self.qlist.iter().filter(|&&k| (m * k as i64).rem_euclid(n) == 0).count();
        cp.min(cq)
    }

    /// Checks the defining identity by exact polynomial arithmetic:
    /// `prod (X^p - 1) * B(X) == prod (X^q - 1) * A(X)`, where `A`, `B` are the
    /// products of cyclotomic polynomials attached to alpha and beta.
    pub fn verify(&self, d: &HGDatum) -> bool {
        let (Some(ma), Some(mb)) = (cyclotomic_multiplicities(d.alpha()), cyclotomic_multiplicities(d.beta())) else {
            return false;
        };
        let phi_prod = |m: &BTreeMap<u32, i64>| {
            let mut acc = vec![BigInt::one()];
            for (&dd, &c) in m {
                let phi = cyclotomic_int(dd);
                for _ in 0..c {
                    acc = poly_mul(&acc, &phi);
                }
            }
            acc
        };
        let binom_prod = |l: &[u32]| {
            let mut acc = vec![BigInt::one()];
            for &e in l {
                let mut f = vec![BigInt::from(0); e as usize + 1];
                f[0] = BigInt::from(-1);
                f[e as usize] = BigInt::one();
                acc = poly_mul(&acc, &f);
            }
            acc
        };
        poly_mul(&binom_prod(&self.plist), &phi_prod(&mb)) == poly_mul(&binom_prod(&self.qlist), &phi_prod(&ma))
    }
}

fn poly_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::from(0); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn cyclotomic_int(m: u32) -> Vec<BigInt> {
    crate::ff_core::cyclotomic_polynomial(m).into_iter().map(BigInt::from).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hg_datum::Rational;

    fn d(alpha: &[(i64, i64)], beta: &[(i64, i64)]) -> HGDatum {
        HGDatum::from_fracs(alpha, beta, Rational::from_integer(1)).unwrap()
    }

    #[test]
    fn four_halves() {
        let hd = d(&[(1, 2); 4], &[(1, 1); 4]);
        let g = GammaVector::of(&hd).unwrap();
        assert_eq!(g.plist, vec![2, 2, 2, 2]);
        assert_eq!(g.qlist, vec![1; 8]);
        assert!(g.verify(&hd));
        assert_eq!(g.n_const, BigRational::from_integer(BigInt::from(256)));
    }

    #[test]
    fn single_half() {
        let hd = d(&[(1, 2)], &[(1, 1)]);
        let g = GammaVector::of(&hd).unwrap();
        assert_eq!((g.plist.clone(), g.qlist.clone()), (vec![2], vec![1, 1]));
        assert!(g.verify(&hd));
    }

    #[test]
    fn sixth_roots() {
        let hd = d(&[(1, 2), (1, 6), (5, 6)], &[(1, 1), (1, 3), (2, 3)]);
        let g = GammaVector::of(&hd).unwrap();
        assert!(g.verify(&hd));
        let hd3 = d(&[(1, 3)], &[(1, 1)]);
        assert_eq!(GammaVector::of(&hd3), Err(DatumError::NotDefinedOverQ));
    }
}
