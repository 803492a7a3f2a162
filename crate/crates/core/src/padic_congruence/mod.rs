//! Truncated hypergeometric sums modulo prime powers, the Morita p-adic Gamma
//! function, Dwork unit-root quotients and the supercongruence registry.

mod cases;
mod residue;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow};

use crate::classical_series::{SeriesError, SeriesSpec};
use crate::hg_datum::Rational;
use crate::modular_forms::ModularError;

pub use cases::{supercongruence_check, CongruenceCase, CongruenceOutcome, Target, CASES};
pub use residue::{inverse_mod, split_p, PadicResidue};

/// Largest `p^k` the O(p^k) Gamma recursion accepts.
pub const GAMMA_COST_LIMIT: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PadicError {
    #[error("value is not p-integral (valuation {0})")]
    NotPIntegral(i64),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error("{0} is not a p-adic integer")]
    NotPAdicInteger(String),
    #[error("p^k = {0} exceeds the cost guard")]
    CostGuard(u64),
    #[error("denominator truncation is not a p-adic unit")]
    NonUnitDenominator,
    #[error("unknown congruence case '{0}'")]
    UnknownCase(String),
    #[error("coefficient unavailable: {0}")]
    CoefficientUnavailable(#[from] ModularError),
    #[error("prime {p} outside the valid range of {case}")]
    PrimeOutOfRange { case: String, p: u64 },
    #[error("cutoff {cutoff} exceeds p^k")]
    CutoffTooLarge { cutoff: usize },
}

fn modulus(p: u64, k: u32) -> BigInt {
    BigInt::from(p).pow(k)
}

/// `p^prefactor * F_cutoff(1)` reduced modulo `p^k`; the product must be p-integral.
pub fn truncated_mod(spec: &SeriesSpec, cutoff: usize, p: u64, k: u32, prefactor: u32) -> Result<BigInt, PadicError> {
    let m = modulus(p, k);
    if BigInt::from(cutoff) > m {
        return Err(PadicError::CutoffTooLarge { cutoff });
    }
    let v = spec.truncated(&BigRational::one(), cutoff)? * BigRational::from_integer(BigInt::from(p).pow(prefactor));
    let r = PadicResidue::from_rational(&v, p, k);
    r.reduce().ok_or(PadicError::NotPIntegral(r.valuation))
}

/// Morita `Gamma_p(x)` modulo `p^k` through the integer lift `0 <= n < p^k` of `x`.
pub fn padic_gamma(x: Rational, p: u64, k: u32) -> Result<BigInt, PadicError> {
    let pk = p.checked_pow(k).filter(|&v| v <= GAMMA_COST_LIMIT).ok_or(PadicError::CostGuard(p.saturating_pow(k)))?;
    let den = *x.denom() as i128;
    if den.rem_euclid(p as i128) == 0 {
        return Err(PadicError::NotPAdicInteger(x.to_string()));
    }
    let m = pk as i128;
    let inv = inverse_mod(&BigInt::from(den), &BigInt::from(m)).expect("denominator prime to p");
    let inv: i128 = inv.try_into().expect("fits");
    let n = ((*x.numer() as i128).rem_euclid(m) * inv).rem_euclid(m) as u64;
    Ok(BigInt::from(gamma_p_int(n, p, pk)))
}

/// `Gamma_p(n) = (-1)^n prod_{0 < j < n, p !| j} j` modulo `m`.
fn gamma_p_int(n: u64, p: u64, m: u64) -> u64 {
    let mut acc: u128 = 1;
    for j in 1..n {
        if j % p != 0 {
            acc = acc * j as u128 % m as u128;
        }
    }
    let acc = acc as u64;
    if n % 2 == 1 {
        (m - acc) % m
    } else {
        acc
    }
}

/// `F(alpha; lambda)_{p^s - 1} / F(alpha; lambda^p)_{p^(s-1) - 1}` modulo `p^s` for `beta = (1, ..., 1)`.
pub fn dwork_unit_root(alpha: &[Rational], lambda: Rational, p: u64, s: u32) -> Result<BigInt, PadicError> {
    let spec = SeriesSpec::new(alpha, &vec![Rational::one(); alpha.len().saturating_sub(1)]);
    let lam = BigRational::new(BigInt::from(*lambda.numer()), BigInt::from(*lambda.denom()));
    let ps = p.pow(s) as usize;
    let num = spec.truncated(&lam, ps - 1)?;
    let den = spec.truncated(&Pow::pow(&lam, p), p.pow(s - 1) as usize - 1)?;
    let n = PadicResidue::from_rational(&num, p, s);
    let d = PadicResidue::from_rational(&den, p, s);
    if d.is_zero() || d.valuation != 0 || n.valuation < 0 {
        return Err(PadicError::NonUnitDenominator);
    }
    n.div(&d)?.reduce().ok_or(PadicError::NonUnitDenominator)
}

/// `x mod p^k` as a canonical residue for signed inputs.
pub fn residue(x: &BigInt, p: u64, k: u32) -> BigInt {
    x.mod_floor(&modulus(p, k))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn ahlgren_truncation_value() {
        let s = SeriesSpec::new(&[r(1, 2); 3], &[r(1, 1); 2]);
        assert_eq!(truncated_mod(&s, 4, 5, 2, 0).unwrap(), BigInt::from(19));
        assert_eq!(truncated_mod(&s, 0, 5, 2, 0).unwrap(), BigInt::one());
    }

    #[test]
    fn prefactor_makes_integral() {
        let h = r(1, 2);
        let (t, tt) = (r(1, 3), r(2, 3));
        let s = SeriesSpec::new(&[h, t, tt, h, t, tt], &[r(5, 6), r(7, 6), r(1, 1), r(5, 6), r(7, 6)]);
        assert!(matches!(truncated_mod(&s, 6, 7, 4, 0), Err(PadicError::NotPIntegral(_))));
        assert!(truncated_mod(&s, 6, 7, 4, 2).is_ok());
    }

    #[test]
    fn gamma_p_basics() {
        for p in [5u64, 7, 11] {
            assert_eq!(padic_gamma(r(1, 1), p, 3).unwrap(), BigInt::from(p.pow(3) - 1));
            assert_eq!(padic_gamma(r(0, 1), p, 3).unwrap(), BigInt::one());
        }
        assert!(matches!(padic_gamma(r(1, 5), 5, 2), Err(PadicError::NotPAdicInteger(_))));
        assert!(matches!(padic_gamma(r(1, 2), 101, 4), Err(PadicError::CostGuard(_))));
    }

    #[test]
    fn gamma_quarter_at_five() {
        // -Gamma_5(1/4)^4 = F_4 mod 5^3 for p = 1 mod 4
        let g = padic_gamma(r(1, 4), 5, 3).unwrap();
        let lhs = residue(&(-g.pow(4u32)), 5, 3);
        let s = SeriesSpec::new(&[r(1, 2); 3], &[r(1, 1); 2]);
        assert_eq!(lhs, truncated_mod(&s, 4, 5, 3, 0).unwrap());
    }

    #[test]
    fn dwork_quotients() {
        let a = [r(1, 2); 3];
        // s = 1 is the plain truncation
        let s = SeriesSpec::new(&a, &[r(1, 1); 2]);
        assert_eq!(dwork_unit_root(&a, r(1, 1), 13, 1).unwrap(), truncated_mod(&s, 12, 13, 1, 0).unwrap());
        // a_13(eta(4t)^6) = 10
        assert_eq!(dwork_unit_root(&a, r(1, 1), 13, 1).unwrap(), residue(&BigInt::from(10), 13, 1));
        let g = padic_gamma(r(1, 4), 5, 2).unwrap();
        assert_eq!(dwork_unit_root(&a, r(1, 1), 5, 2).unwrap(), residue(&(-g.pow(4u32)), 5, 2));
    }
}
