use num_bigint::BigInt;
use num_rational::BigRational;

use super::*;
use crate::ff_core::{CharIndex, CycInt, FiniteFieldTable};
use crate::hg_datum::{HGDatum, Rational};

type C = (f64, f64);

fn cmul(a: C, b: C) -> C {
    (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0)
}

/// Character value straight from the definition, in floating point.
fn chi(field: &FiniteFieldTable, k: u64, x: u32) -> C {
    if x == 0 {
        return (0.0, 0.0);
    }
    let n = field.q() as f64 - 1.0;
    let t = 2.0 * std::f64::consts::PI * ((k * field.dlog(x).unwrap() as u64) as f64) / n;
    (t.cos(), t.sin())
}

/// Brute-force nested sum over `(x_2, ..., x_n)`.
fn p_brute(field: &FiniteFieldTable, a: &[CharIndex], b: &[CharIndex], lam: u32) -> C {
    let n1 = field.q() as u64 - 1;
    let inv = |c: CharIndex| (n1 - c.0 % n1) % n1;
    let mut total = (0.0, 0.0);
    let n = a.len();
    let mut xs = vec![0u32; n - 1];
    loop {
        let mut term = (1.0, 0.0);
        let mut prod = lam;
        for i in 1..n {
            let x = xs[i - 1];
            term = cmul(term, chi(field, a[i].0, x));
            term = cmul(term, chi(field, (inv(a[i]) + b[i - 1].0) % n1, field.one_minus(x)));
            prod = field.mul(prod, x);
        }
        term = cmul(term, chi(field, inv(a[0]), field.one_minus(prod)));
        total = (total.0 + term.0, total.1 + term.1);
        let mut i = 0;
        while i < n - 1 {
            xs[i] += 1;
            if xs[i] < field.q() {
                break;
            }
            xs[i] = 0;
            i += 1;
        }
        if i == n - 1 {
            return total;
        }
    }
}

fn close(v: &CycInt, c: C) -> bool {
    let z = v.to_c64();
    (z.0 - c.0).abs() < 1e-6 && (z.1 - c.1).abs() < 1e-6
}

fn d(s: &str) -> HGDatum {
    s.parse().unwrap()
}

#[test]
fn recursion_matches_brute_force() {
    for (p, s) in [(7u32, 1u32), (13, 1), (5, 2)] {
        let f = FiniteFieldTable::build(p, s).unwrap();
        let n1 = f.q() as u64 - 1;
        let a = [CharIndex(1), CharIndex(n1 / 2), CharIndex(3 % n1)];
        let b = [CharIndex(2), CharIndex(0)];
        let tab = period_table(&f, &a, &b, f.q() - 1).unwrap();
        for lam in 0..f.q() {
            assert!(close(&tab[lam as usize], p_brute(&f, &a, &b, lam)), "q={} lam={lam}", f.q());
        }
    }
}

#[test]
fn spectral_matches_recursion() {
    let f = FiniteFieldTable::build(13, 1).unwrap();
    for s in ["HD2(1/2,1/3)", "HD3(1/2,1/2)", "HD1(1/3,1/3)"] {
        let datum = d(s);
        let w = CharIndex(f.q() as u64 - 2);
        for lam in 1..f.q() {
            let r = p_recursive(&datum, lam, &f, w).unwrap();
            let sp = p_spectral(&datum, lam, &f, w).unwrap();
            assert_eq!(r, sp, "{s} lam={lam}");
        }
    }
}

#[test]
fn hd3_half_half_at_one() {
    let datum = d("HD3(1/2,1/2)");
    for (p, want) in [(5u32, -6i128), (7, 0), (13, 10)] {
        let f = FiniteFieldTable::build(p, 1).unwrap();
        let v = p_normalized(&datum, 1, &f).unwrap();
        assert_eq!(v.to_rational_integer(), Some(want), "p={p}");
    }
}

#[test]
fn exact_and_direct_h_agree() {
    let datum = d("HD2(1/2,1/2)");
    for p in [5u32, 13, 17, 29] {
        let f = FiniteFieldTable::build(p, 1).unwrap();
        for lam in [Rational::from_integer(1), Rational::new(2, 3), Rational::from_integer(-4)] {
            if lambda_in_field(lam, &f).is_err() {
                continue;
            }
            let ex = h_value(&datum, lam, &f, HMethod::Exact).unwrap();
            let di = h_value(&datum, lam, &f, HMethod::Direct { precision: 128 }).unwrap();
            assert_eq!(ex.value, di.value, "p={p} lam={lam}");
            assert!(di.error_bound.unwrap() < 0.1);
        }
    }
}

#[test]
fn h_of_hd3_sixth_vanishes_at_five() {
    let datum = d("HD3(1/6,1/6)");
    let f = FiniteFieldTable::build(5, 1).unwrap();
    let h = h_value(&datum, Rational::from_integer(1), &f, HMethod::Direct { precision: 128 }).unwrap();
    assert_eq!(h.value, BigRational::from_integer(BigInt::from(0)));
}

#[test]
fn omega_choice_is_irrelevant_for_normalized_values() {
    let f = FiniteFieldTable::build(31, 1).unwrap();
    let datum = d("HD2(1/3,1/3)");
    assert!(admissible_omegas(&f, 3, 2).len() == 2);
    for lam in [1, 2, 17] {
        p_normalized(&datum, lam, &f).unwrap();
    }
}

#[test]
fn euler_factors_at_seven() {
    let quintic = d("alpha=1/2,1/5,2/5,3/5,4/5 beta=1,1/10,3/10,7/10,9/10 lambda=1");
    let e = euler_factor_prim(&quintic, 7, None, 128).unwrap();
    assert_eq!(e.coeffs, vec![1, 0, -88, 0, 2401]);
    assert_eq!(e.twist, -1);
    assert!(e.max_root_deviation < 1e-9);

    let chi3 = OneDim { disc: 3, power: 1 };
    assert_eq!(frobenius_trace(&d("HD2(1/2,1/3)"), 7).unwrap(), BigInt::from(8 - 7));
    let e = euler_factor_prim(&d("HD2(1/2,1/3)"), 7, Some(chi3), 128).unwrap();
    assert_eq!(e.to_string(), "343*X^2 - 8*X + 1");

    let od = OneDim { disc: 3, power: 2 };
    let e = euler_factor_prim(&d("HD1(1/2,1/3)"), 7, Some(od), 128).unwrap();
    let mut fs = e.factors.clone();
    fs.sort();
    assert_eq!(fs, vec![vec![1, -56, 16807], vec![1, 88, 16807]]);
    assert!(e.max_root_deviation < 1e-9);
}

fn field(p: u32, s: u32) -> FiniteFieldTable {
    FiniteFieldTable::build(p, s).unwrap()
}

#[test]
fn kummer_random_tuples() {
    for (p, s) in [(7, 1), (9u32, 1u32), (13, 1)] {
        let (p, s) = if p == 9 { (3, 2) } else { (p, s) };
        let r = kummer_check(&field(p, s), 15, 7).unwrap();
        assert!(r.all_pass(), "{}", r.to_table());
    }
}

#[test]
fn clausen_over_f9_and_f13() {
    for (p, s) in [(3, 2), (13, 1)] {
        let r = clausen_check(&field(p, s)).unwrap();
        assert!(!r.items.is_empty());
        assert!(r.all_pass(), "{}", r.to_table());
    }
}

#[test]
fn wellposed_over_f13() {
    let r = wellposed_6p5_check(&field(13, 1), 6, 3).unwrap();
    assert!(r.all_pass(), "{}", r.to_table());
}

#[test]
fn gauss_two_p_one() {
    let r = gauss_2p1_check(&field(11, 1)).unwrap();
    assert!(r.all_pass(), "{}", r.to_table());
}

#[test]
fn hd3_vanishing_small() {
    let fam = crate::hg_datum::whipple_family(Rational::new(1, 2), Rational::new(1, 2)).unwrap();
    for p in [7, 11, 19] {
        let r = hd3_vanishing_check(&fam, &field(p, 1)).unwrap();
        assert!(r.all_pass(), "{}", r.to_table());
    }
}
