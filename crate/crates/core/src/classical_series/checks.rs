use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::hg_datum::Rational;
use crate::numeric::Real;
use crate::report::{ReportItem, Status, VerificationReport};

use super::gamma::gamma_ratio;
use super::series::{big, pochhammer, PowerSeries, SeriesSpec};
use super::SeriesError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WhippleMode {
    TerminatingExact,
    /// numeric evaluation with Gamma values at the given precision
    Numeric { precision: u32 },
}

fn qi(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

fn half() -> BigRational {
    BigRational::new(BigInt::from(1), BigInt::from(2))
}

fn item(case: &str, params: String, ok: bool, lhs: String, rhs: String, disc: Option<f64>, started: Instant) -> ReportItem {
    ReportItem {
        case: case.into(),
        parameters: params,
        status: if ok { Status::Pass } else { Status::Fail },
        theorem: true,
        lhs,
        rhs,
        discrepancy: disc,
        runtime_ms: started.elapsed().as_millis() as u64,
    }
}

fn nonpositive_int(x: &BigRational) -> Option<usize> {
    if x.is_integer() && !x.is_positive() {
        (-x.to_integer()).to_usize()
    } else {
        None
    }
}

fn real_sum(spec: &SeriesSpec, w: u32) -> Result<Real, SeriesError> {
    let n = spec.terminates_at().ok_or(SeriesError::NonTerminating)?;
    let mut t = Real::one(w);
    let mut s = Real::zero(w);
    for k in 0..=n {
        s = s.add(&t);
        if k < n {
            t = t.mul(&Real::from_ratio(&spec.ratio(k)?, w));
        }
    }
    Ok(s)
}

/// Sides of the `7F6(1)` transformation, with `a, c, d, e, f, g` as rationals.
struct WhippleSides {
    left: SeriesSpec,
    right: SeriesSpec,
    gamma_num: Vec<BigRational>,
    gamma_den: Vec<BigRational>,
}

fn whipple_sides(a: &BigRational, c: &BigRational, d: &BigRational, e: &BigRational, f: &BigRational, g: &BigRational) -> WhippleSides {
    let one = BigRational::one();
    let ap = &one + a;
    let left = SeriesSpec::from_big(
        vec![a.clone(), &one + a * half(), c.clone(), d.clone(), e.clone(), f.clone(), g.clone()],
        vec![a * half(), &ap - c, &ap - d, &ap - e, &ap - f, &ap - g],
    );
    // first upper parameter 1 + a - c - d, which is `a` when c + d = 1
    let right = SeriesSpec::from_big(vec![&ap - c - d, e.clone(), f.clone(), g.clone()], vec![e + f + g - a, &ap - c, &ap - d]);
    WhippleSides {
        left,
        right,
        gamma_num: vec![&ap - e, &ap - f, &ap - g, &ap - e - f - g],
        gamma_den: vec![ap.clone(), &ap - f - g, &ap - e - f, &ap - e - g],
    }
}

/// Gamma quotient as a Pochhammer ratio when `g = -n`.
fn whipple_quotient_exact(a: &BigRational, e: &BigRational, f: &BigRational, n: usize) -> Result<BigRational, SeriesError> {
    let ap = BigRational::one() + a;
    let num = pochhammer(&ap, n) * pochhammer(&(&ap - e - f), n);
    let den = pochhammer(&(&ap - f), n) * pochhammer(&(&ap - e), n);
    if den.is_zero() {
        return Err(SeriesError::GammaPole("Pochhammer denominator".into()));
    }
    Ok(num / den)
}

/// Random terminating tuples `[a, c, d, e, f, g]` with `g` a nonpositive integer and
/// no lower parameter or Pochhammer denominator hitting a nonpositive integer.
pub fn random_terminating_tuples(seed: u64, count: usize) -> Vec<[Rational; 6]> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    let bad = |x: Rational| x.is_integer() && x <= Rational::from_integer(0);
    while out.len() < count {
        let mut frac = || {
            let d = rng.gen_range(2..=9i64);
            let n = rng.gen_range(-2 * d..=2 * d);
            Rational::new(n, d)
        };
        let (a, c, d, e, f) = (frac(), frac(), frac(), frac(), frac());
        let g = Rational::from_integer(-rng.gen_range(1..=6i64));
        let one = Rational::from_integer(1);
        let ap = one + a;
        let lower = [a / 2, ap - c, ap - d, ap - e, ap - f, ap - g, e + f + g - a, ap - e - f];
        if [a, c, d, e, f].iter().any(|x| x.is_integer()) || lower.iter().any(|&x| bad(x)) {
            continue;
        }
        out.push([a, c, d, e, f, g]);
    }
    out
}

/// The terminating `7F6(1)` transformation.
pub fn whipple_check(params: [Rational; 6], mode: WhippleMode) -> Result<VerificationReport, SeriesError> {
    let started = Instant::now();
    let [a, c, d, mut e, mut f, mut g] = params.map(big);
    let label = format!("a={} c={} d={} e={} f={} g={}", params[0], params[1], params[2], params[3], params[4], params[5]);
    // symmetric in e, f, g: move a terminating one to g
    if nonpositive_int(&g).is_none() {
        if nonpositive_int(&e).is_some() {
            std::mem::swap(&mut e, &mut g);
        } else if nonpositive_int(&f).is_some() {
            std::mem::swap(&mut f, &mut g);
        }
    }
    let sides = whipple_sides(&a, &c, &d, &e, &f, &g);
    let mut rep = VerificationReport::new("whipple");
    match mode {
        WhippleMode::TerminatingExact => {
            let n = nonpositive_int(&g).ok_or(SeriesError::NonTerminating)?;
            let lhs = sides.left.terminating_sum(&BigRational::one())?;
            let quot = whipple_quotient_exact(&a, &e, &f, n)?;
            let rhs = quot * sides.right.terminating_sum(&BigRational::one())?;
            rep.push(item("whipple_7F6", label, lhs == rhs, lhs.to_string(), rhs.to_string(), Some(0.0), started));
        }
        WhippleMode::Numeric { precision } => {
            let w = precision + 32;
            let lhs = real_sum(&sides.left, w)?;
            let quot = gamma_ratio(&sides.gamma_num, &sides.gamma_den, w)?;
            let rhs = quot.mul(&real_sum(&sides.right, w)?);
            let diff = lhs.sub(&rhs).abs();
            let tol = -(precision as i64) + 16 + lhs.magnitude().max(0);
            let ok = diff.is_zero() || diff.magnitude() <= tol;
            rep.push(item("whipple_7F6", label, ok, lhs.to_decimal(30), rhs.to_decimal(30), Some(diff.to_f64()), started));
        }
    }
    Ok(rep)
}

/// The self-dual specialisation `a = 1/2, d = 1 - c, e = (1 - p)/2, g = 1 - f` with
/// `C = Gamma(p/2)^2 Gamma(3/2 - f) Gamma(1/2 + f) / (Gamma(1/2)^2 Gamma(1 + p/2 - f) Gamma(p/2 + f))`.
pub fn whipple2_check(c: Rational, f: Rational, p: u32, mode: WhippleMode) -> Result<VerificationReport, SeriesError> {
    if p % 2 == 0 {
        return Err(SeriesError::BadParameters);
    }
    let started = Instant::now();
    let (cb, fb) = (big(c), big(f));
    let one = BigRational::one();
    let pp = qi(p as i64);
    let e = (&one - &pp) * half();
    let sides = whipple_sides(&half(), &cb, &(&one - &cb), &e, &fb, &(&one - &fb));
    let m = ((p - 1) / 2) as usize;
    let label = format!("c={c} f={f} p={p}");
    let mut rep = VerificationReport::new("whipple2");
    match mode {
        WhippleMode::TerminatingExact => {
            let cq = pochhammer(&half(), m).pow(2) / (pochhammer(&(qi(3) * half() - &fb), m) * pochhammer(&(half() + &fb), m));
            let lhs = sides.left.terminating_sum(&one)?;
            let rhs = cq * &pp * sides.right.terminating_sum(&one)?;
            rep.push(item("whipple2", label, lhs == rhs, lhs.to_string(), rhs.to_string(), Some(0.0), started));
        }
        WhippleMode::Numeric { precision } => {
            let w = precision + 32;
            let ph = &pp * half();
            let cq = gamma_ratio(
                &[ph.clone(), ph.clone(), qi(3) * half() - &fb, half() + &fb],
                &[half(), half(), &one + &ph - &fb, &ph + &fb],
                w,
            )?;
            let lhs = real_sum(&sides.left, w)?;
            let rhs = cq.mul(&Real::from_i64(p as i64, w)).mul(&real_sum(&sides.right, w)?);
            let diff = lhs.sub(&rhs).abs();
            let ok = diff.is_zero() || diff.magnitude() <= -(precision as i64) + 16 + lhs.magnitude().max(0);
            rep.push(item("whipple2", label, ok, lhs.to_decimal(30), rhs.to_decimal(30), Some(diff.to_f64()), started));
        }
    }
    Ok(rep)
}

fn first_mismatch(a: &PowerSeries, b: &PowerSeries) -> Option<usize> {
    a.c.iter().zip(&b.c).position(|(x, y)| x != y)
}

fn series_item(case: &str, params: String, lhs: &PowerSeries, rhs: &PowerSeries, started: Instant) -> ReportItem {
    match first_mismatch(lhs, rhs) {
        None => item(case, params, true, format!("{} coefficients", lhs.c.len()), "equal".into(), Some(0.0), started),
        Some(k) => item(case, params, false, format!("x^{k}: {}", lhs.c[k]), format!("x^{k}: {}", rhs.c[k]), None, started),
    }
}

/// Both Clausen identities as power series in `x` to order `n`.
pub fn clausen_check(a: Rational, b: Rational, n: usize) -> Result<VerificationReport, SeriesError> {
    let one = Rational::from_integer(1);
    let h = Rational::new(1, 2);
    let two = Rational::from_integer(2);
    let mut rep = VerificationReport::new("clausen_classical");
    let params = format!("a={a} b={b} N={n}");

    let started = Instant::now();
    let f = SeriesSpec::new(&[a, b], &[a + b + h]).power_series(n)?;
    let sq = SeriesSpec::new(&[two * a, two * b, a + b], &[two * a + two * b, a + b + h]).power_series(n)?;
    rep.push(series_item("clausen_square", params.clone(), &f.mul(&f), &sq, started));

    let started = Instant::now();
    let g = SeriesSpec::new(&[h - a, h - b], &[one + h - a - b]).power_series(n)?;
    let prod = SeriesSpec::new(&[h, a - b + h, b - a + h], &[a + b + h, one + h - a - b]).power_series(n)?;
    rep.push(series_item("clausen_product", params, &f.mul(&g), &prod, started));
    Ok(rep)
}

/// `3F2(1/2, 1/6, 5/6; 4/3, 2/3; x(x+4)^3 / (4(2x-1)^3)) = 4 (1-2x)^(1/2) / (4+x)` to order `n`.
pub fn lemma_233_check(n: usize) -> Result<VerificationReport, SeriesError> {
    let started = Instant::now();
    let r = |a: i64, b: i64| BigRational::new(BigInt::from(a), BigInt::from(b));
    // y = x (x+4)^3 / (4 (2x-1)^3)
    let x_plus_4 = PowerSeries::from_coeffs(vec![r(4, 1), r(1, 1)], n);
    let cube = x_plus_4.mul(&x_plus_4).mul(&x_plus_4);
    let x = PowerSeries::from_coeffs(vec![r(0, 1), r(1, 1)], n);
    let two_x_minus_1 = PowerSeries::from_coeffs(vec![r(-1, 1), r(2, 1)], n);
    let den = two_x_minus_1.mul(&two_x_minus_1).mul(&two_x_minus_1).scale(&r(4, 1));
    let y = x.mul(&cube).mul(&den.inv().expect("unit constant term"));
    let outer = SeriesSpec::new(
        &[Rational::new(1, 2), Rational::new(1, 6), Rational::new(5, 6)],
        &[Rational::new(4, 3), Rational::new(2, 3)],
    )
    .power_series(n)?;
    let lhs = PowerSeries::compose(&outer.c, &y).expect("y(0) = 0");
    let one_minus_2x = PowerSeries::from_coeffs(vec![r(1, 1), r(-2, 1)], n);
    let sqrt = one_minus_2x.pow_rational(&r(1, 2)).expect("unit constant term");
    let rhs = sqrt.scale(&r(4, 1)).mul(&x_plus_4.inv().expect("unit constant term"));
    let mut rep = VerificationReport::new("lemma_233");
    rep.push(series_item("lemma_233", format!("N={n}"), &lhs, &rhs, started));
    Ok(rep)
}

/// `7F6(1/2, 5/4, c, 1-c, 1/2, f, 1-f; 1/4, 3/2-c, 1/2+c, 1, 3/2-f, 1/2+f; lambda)
/// = 4 lambda F'(lambda) + F(lambda)` with `F = F(HD1(c, f))`, coefficientwise to order `n`.
pub fn derivative_relation_check(c: Rational, f: Rational, n: usize) -> Result<VerificationReport, SeriesError> {
    let started = Instant::now();
    let one = Rational::from_integer(1);
    let h = Rational::new(1, 2);
    let th = Rational::new(3, 2);
    let seven = SeriesSpec::new(
        &[h, Rational::new(5, 4), c, one - c, h, f, one - f],
        &[Rational::new(1, 4), th - c, h + c, one, th - f, h + f],
    )
    .power_series(n)?;
    let fser = SeriesSpec::from_datum(&[h, c, one - c, h, f, one - f], &[one, th - c, h + c, one, th - f, h + f])?.power_series(n)?;
    let rhs = PowerSeries {
        c: fser.c.iter().enumerate().map(|(k, v)| v * BigRational::from_integer(BigInt::from(4 * k as i64 + 1))).collect(),
    };
    let mut rep = VerificationReport::new("derivative_relation");
    rep.push(series_item("7F6_derivative", format!("c={c} f={f} N={n}"), &seven, &rhs, started));
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn whipple_trivial_and_terminating() {
        let rep = whipple_check([r(1, 2), r(1, 3), r(2, 3), r(1, 5), r(1, 4), r(0, 1)], WhippleMode::TerminatingExact).unwrap();
        assert!(rep.all_pass());
        assert_eq!(rep.items[0].lhs, "1");
        let rep = whipple_check([r(1, 2), r(1, 3), r(2, 3), r(-2, 1), r(1, 4), r(-1, 1)], WhippleMode::TerminatingExact).unwrap();
        assert!(rep.all_pass(), "{}", rep.to_table());
        let rep = whipple_check([r(1, 2), r(1, 3), r(2, 3), r(-2, 1), r(1, 4), r(-1, 1)], WhippleMode::Numeric { precision: 200 }).unwrap();
        assert!(rep.all_pass(), "{}", rep.to_table());
        assert!(whipple_check([r(1, 2), r(1, 3), r(2, 3), r(1, 5), r(1, 4), r(1, 7)], WhippleMode::TerminatingExact).is_err());
    }

    #[test]
    fn whipple_general_terminating_tuples() {
        let tuples = random_terminating_tuples(11, 12);
        assert_eq!(tuples, random_terminating_tuples(11, 12));
        for t in tuples {
            let rep = whipple_check(t, WhippleMode::TerminatingExact).unwrap();
            assert!(rep.all_pass(), "{}", rep.to_table());
        }
        // c + d != 1 needs the 1 + a - c - d upper parameter on the right
        let rep = whipple_check([r(1, 3), r(1, 5), r(2, 7), r(3, 4), r(1, 6), r(-3, 1)], WhippleMode::TerminatingExact).unwrap();
        assert!(rep.all_pass(), "{}", rep.to_table());
    }

    #[test]
    fn whipple2_both_modes() {
        for p in [1, 3, 5, 7] {
            let rep = whipple2_check(r(1, 2), r(1, 3), p, WhippleMode::TerminatingExact).unwrap();
            assert!(rep.all_pass(), "{}", rep.to_table());
        }
        let rep = whipple2_check(r(1, 2), r(1, 3), 3, WhippleMode::Numeric { precision: 256 }).unwrap();
        assert!(rep.all_pass() && rep.items[0].discrepancy.unwrap() < 1e-20, "{}", rep.to_table());
    }

    #[test]
    fn clausen_examples() {
        assert!(clausen_check(r(1, 4), r(1, 4), 20).unwrap().all_pass());
        assert!(clausen_check(r(1, 4), r(7, 12), 20).unwrap().all_pass());
        assert!(clausen_check(r(1, 4), r(7, 12), 0).unwrap().all_pass());
    }

    #[test]
    fn clausen_detects_wrong_parameters() {
        // lower parameter off by one quarter: identities must fail
        let f = SeriesSpec::new(&[r(1, 4), r(1, 4)], &[r(1, 1)]).power_series(6).unwrap();
        let sq = SeriesSpec::new(&[r(1, 2), r(1, 2), r(1, 2)], &[r(1, 1), r(1, 1)]).power_series(6).unwrap();
        assert_eq!(f.mul(&f), sq);
        let bad = SeriesSpec::new(&[r(1, 2), r(1, 2), r(1, 2)], &[r(1, 1), r(5, 4)]).power_series(6).unwrap();
        assert_ne!(f.mul(&f), bad);
    }

    #[test]
    fn lemma_233_orders() {
        for n in [0, 10, 25] {
            assert!(lemma_233_check(n).unwrap().all_pass(), "order {n}");
        }
    }

    #[test]
    fn derivative_relation_seven_pairs() {
        for (c, f) in [(r(1, 2), r(1, 2)), (r(1, 2), r(1, 3)), (r(1, 5), r(2, 5))] {
            assert!(derivative_relation_check(c, f, 30).unwrap().all_pass());
        }
    }
}

