use proptest::prelude::*;

use hgm_core::ff_core::{gauss_sum, jacobi_sum, CharIndex, CycInt, FiniteFieldTable};

const FIELDS: [(u32, u32); 7] = [(5, 1), (7, 1), (13, 1), (3, 2), (5, 2), (3, 3), (7, 2)];

fn config() -> ProptestConfig {
    ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() }
}

fn field_strategy() -> impl Strategy<Value = FiniteFieldTable> {
    prop::sample::select(FIELDS.to_vec()).prop_map(|(p, s)| FiniteFieldTable::build(p, s).unwrap())
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn field_axioms(f in field_strategy(), xs in prop::array::uniform3(any::<u32>())) {
        let [a, b, c] = xs.map(|x| x % f.q());
        prop_assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.add(a, f.neg(a)), 0);
        prop_assert_eq!(f.sub(a, b), f.add(a, f.neg(b)));
        prop_assert_eq!(f.pow(a, f.q() as u64), a);
        if a != 0 {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
            prop_assert_eq!(f.gen_pow(f.dlog(a).unwrap() as u64), a);
        }
        // the trace is additive and lands in F_p
        prop_assert_eq!(f.trace(f.add(a, b)), (f.trace(a) + f.trace(b)) % f.p());
    }

    #[test]
    fn jacobi_sums_have_norm_q(f in field_strategy(), i in any::<u64>(), j in any::<u64>()) {
        let n = f.q() as u64 - 1;
        let (a, b) = (CharIndex(i % n), CharIndex(j % n));
        prop_assume!(!a.is_trivial() && !b.is_trivial() && !a.mul(b, &f).is_trivial());
        let jac = jacobi_sum(&f, a, b, f.q() - 1).unwrap();
        prop_assert_eq!(&jac * &jac.conj(), CycInt::from_int(f.q() - 1, f.q() as i128));
        // symmetric in A and B
        prop_assert_eq!(jac, jacobi_sum(&f, b, a, f.q() - 1).unwrap());
    }

    #[test]
    fn jacobi_is_a_gauss_quotient(f in field_strategy(), i in any::<u64>(), j in any::<u64>()) {
        let n = f.q() as u64 - 1;
        let (a, b) = (CharIndex(i % n), CharIndex(j % n));
        prop_assume!(!a.is_trivial() && !b.is_trivial() && !a.mul(b, &f).is_trivial());
        let g = |c: CharIndex| gauss_sum(&f, c, 96).unwrap().value;
        let lhs = jacobi_sum(&f, a, b, f.q() - 1).unwrap().to_c64();
        let ga = g(a);
        let prod = &ga * &g(b);
        let gab = g(a.mul(b, &f));
        // J g(AB) = g(A) g(B)
        let (jr, ji) = lhs;
        let (gr, gi) = gab.to_f64();
        let (pr, pi) = prod.to_f64();
        prop_assert!((jr * gr - ji * gi - pr).abs() < 1e-8 && (jr * gi + ji * gr - pi).abs() < 1e-8);
        prop_assert!((ga.norm_sqr().to_f64() - f.q() as f64).abs() < 1e-9);
    }

    #[test]
    fn galois_action_is_a_ring_map(m in prop::sample::select(vec![4u32, 6, 8, 10, 12, 24]), e1 in -30i64..30, e2 in -30i64..30, k in 1i64..50) {
        prop_assume!(num_integer::gcd(k, m as i64) == 1);
        let x = &CycInt::zeta_pow(m, e1) + &CycInt::from_int(m, 3);
        let y = &CycInt::zeta_pow(m, e2) - &CycInt::zeta_pow(m, 1);
        prop_assert_eq!((&x * &y).galois(k), &x.galois(k) * &y.galois(k));
        prop_assert_eq!((&x + &y).galois(k), &x.galois(k) + &y.galois(k));
        prop_assert_eq!(x.conj(), x.galois(-1));
    }
}
