use proptest::prelude::*;

use hgm_core::classical_series::{clausen_check, random_terminating_tuples, whipple_check, SeriesSpec, WhippleMode};
use hgm_core::hg_datum::Rational;

fn config() -> ProptestConfig {
    ProptestConfig { cases: 40, failure_persistence: None, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn terminating_whipple_holds_exactly(seed in any::<u64>()) {
        for t in random_terminating_tuples(seed, 2) {
            let rep = whipple_check(t, WhippleMode::TerminatingExact).unwrap();
            prop_assert!(rep.all_pass(), "{}", rep.to_table());
        }
    }

    #[test]
    fn whipple_is_symmetric_in_e_f_g(seed in any::<u64>()) {
        let [a, c, d, e, f, g] = random_terminating_tuples(seed, 1)[0];
        let x = whipple_check([a, c, d, e, f, g], WhippleMode::TerminatingExact).unwrap();
        let y = whipple_check([a, c, d, g, e, f], WhippleMode::TerminatingExact).unwrap();
        prop_assert_eq!(&x.items[0].lhs, &y.items[0].lhs);
    }

    #[test]
    fn clausen_for_random_parameters(an in 1i64..12, ad in 2i64..13, bn in 1i64..12, bd in 2i64..13) {
        let (a, b) = (Rational::new(an, ad), Rational::new(bn, bd));
        // a + b + 1/2 must not be a nonpositive integer
        prop_assume!(!(a + b + Rational::new(1, 2)).is_integer());
        let rep = clausen_check(a, b, 12).unwrap();
        prop_assert!(rep.all_pass(), "{}", rep.to_table());
    }

    #[test]
    fn truncation_is_a_prefix_sum(n in 0usize..20, num in -3i64..4, den in 1i64..5) {
        let spec = SeriesSpec::new(&[Rational::new(1, 2), Rational::new(1, 3)], &[Rational::new(5, 4)]);
        let z = num_rational::BigRational::new(num.into(), den.into());
        let terms = spec.terms(&z, n).unwrap();
        let sum: num_rational::BigRational = terms.iter().sum();
        prop_assert_eq!(sum, spec.truncated(&z, n).unwrap());
    }
}
