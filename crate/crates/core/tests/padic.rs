use hgm_core::hg_datum::Rational;
use hgm_core::modular_forms::CoefficientProvider;
use hgm_core::padic_congruence::{padic_gamma, supercongruence_check, truncated_mod, CongruenceCase, CASES};
use hgm_core::report::Status;
use num_bigint::BigInt;
use num_integer::Integer;
use proptest::prelude::*;

const PRIMES: &[u64] = &[5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47];

proptest! {
    #![proptest_config(ProptestConfig { cases: 50, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn gamma_functional_equation(pi in 0usize..3, n in 0i64..1331) {
        let p = [5u64, 7, 11][pi];
        let m = BigInt::from(p).pow(3);
        let n = n % (p as i64).pow(3);
        let g0 = padic_gamma(Rational::from_integer(n), p, 3).unwrap();
        let g1 = padic_gamma(Rational::from_integer(n + 1), p, 3).unwrap();
        let factor = if n % p as i64 == 0 { BigInt::from(-1) } else { BigInt::from(-n) };
        prop_assert_eq!(g1, (factor * g0).mod_floor(&m));
    }

    #[test]
    fn truncation_consistent_across_precision(ci in 0usize..6, pi in 1usize..6, k in 1u32..4) {
        let case = &CASES[ci];
        let p = PRIMES[pi].max(case.min_prime);
        let spec = case.spec();
        let lo = truncated_mod(&spec, (p - 1) as usize, p, k, case.prefactor).unwrap();
        let hi = truncated_mod(&spec, (p - 1) as usize, p, k + 1, case.prefactor).unwrap();
        prop_assert_eq!(lo, hi.mod_floor(&BigInt::from(p).pow(k)));
    }
}

#[test]
fn ahlgren_holds_for_all_small_primes() {
    let prov = CoefficientProvider::offline();
    for &p in PRIMES {
        let o = supercongruence_check("ahlgren", p, None, &prov).unwrap();
        assert_eq!(o.status, Status::Pass, "p = {p}: {} vs {}", o.lhs, o.rhs);
    }
}

#[test]
fn long_ramakrishna_holds_to_37() {
    let prov = CoefficientProvider::offline();
    for &p in PRIMES.iter().filter(|&&p| p <= 37) {
        let o = supercongruence_check("long_ramakrishna", p, None, &prov).unwrap();
        assert_eq!(o.status, Status::Pass, "p = {p}: {} vs {}", o.lhs, o.rhs);
    }
}

#[test]
fn gamma_quarter_mod_125() {
    let g = padic_gamma(Rational::new(1, 4), 5, 3).unwrap();
    let spec = CongruenceCase::find("ahlgren").unwrap().spec();
    let lhs = truncated_mod(&spec, 4, 5, 3, 0).unwrap();
    assert_eq!((-g.pow(4u32)).mod_floor(&BigInt::from(125)), lhs);
}

/// Every registered case at its stated modulus for primes up to 37.
#[test]
fn registry_sweep() {
    let prov = CoefficientProvider::offline();
    let mut failures = Vec::new();
    for case in CASES {
        let mut depths = Vec::new();
        for &p in PRIMES.iter().filter(|&&p| p >= case.min_prime && p <= 37) {
            let o = supercongruence_check(case.id, p, None, &prov).unwrap();
            depths.push(format!("{p}:{}", o.max_k));
            if !o.holds {
                failures.push(format!("{} p={p} max_k={}", case.id, o.max_k));
            }
        }
        println!("{} (mod p^{}) max_k {}", case.id, case.k, depths.join(" "));
    }
    assert!(failures.is_empty(), "{failures:?}");
}
