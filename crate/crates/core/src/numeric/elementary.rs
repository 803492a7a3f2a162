use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::Real;

const GUARD: u32 = 48;

fn cache() -> &'static Mutex<HashMap<(&'static str, u32), Real>> {
    static C: OnceLock<Mutex<HashMap<(&'static str, u32), Real>>> = OnceLock::new();
    C.get_or_init(|| Mutex::new(HashMap::new()))
}

fn cached(name: &'static str, prec: u32, f: impl FnOnce(u32) -> Real) -> Real {
    if let Some(v) = cache().lock().unwrap().get(&(name, prec)) {
        return v.clone();
    }
    let v = f(prec);
    cache().lock().unwrap().insert((name, prec), v.clone());
    v
}

/// `atan(1/n) * 2^bits` in fixed point.
fn atan_inv_fixed(n: u64, bits: u32) -> BigInt {
    let n2 = BigInt::from(n * n);
    let mut term = (BigInt::one() << bits) / n;
    let mut sum = term.clone();
    let mut k = 1u64;
    loop {
        term /= &n2;
        if term.is_zero() {
            break;
        }
        let t = &term / (2 * k + 1);
        if k % 2 == 1 {
            sum -= t;
        } else {
            sum += t;
        }
        k += 1;
    }
    sum
}

pub fn pi(prec: u32) -> Real {
    cached("pi", prec, |prec| {
        let bits = prec + GUARD;
        let v = atan_inv_fixed(5, bits) * 16 - atan_inv_fixed(239, bits) * 4;
        Real::from_parts(v, -(bits as i64), prec)
    })
}

pub fn ln2(prec: u32) -> Real {
    cached("ln2", prec, |prec| {
        // ln 2 = sum 1/(k 2^k)
        let bits = prec + GUARD;
        let mut sum = BigInt::zero();
        let mut k = 1u64;
        loop {
            if k as u32 > bits {
                break;
            }
            let t = (BigInt::one() << (bits - k as u32)) / k;
            if t.is_zero() {
                break;
            }
            sum += t;
            k += 1;
        }
        Real::from_parts(sum, -(bits as i64), prec)
    })
}

pub fn exp(x: &Real) -> Real {
    let prec = x.prec();
    if x.is_zero() {
        return Real::one(prec);
    }
    let w = prec + GUARD;
    let xf = x.to_f64();
    assert!(xf.abs() < 1e15, "exp argument out of range");
    let k = (xf / std::f64::consts::LN_2).round() as i64;
    let kbits = 64 - (k.unsigned_abs()).leading_zeros();
    let r = x.clone().with_prec(w + kbits) - ln2(w + kbits).mul_i64(k);
    let s = 12;
    let r = r.with_prec(w).ldexp(-s);
    let mut sum = Real::one(w);
    let mut term = Real::one(w);
    let mut j = 1i64;
    loop {
        term = (&term * &r).div_i64(j);
        if term.is_zero() || term.magnitude() < -(w as i64) - 4 {
            break;
        }
        sum = &sum + &term;
        j += 1;
    }
    for _ in 0..s {
        sum = sum.square();
    }
    sum.ldexp(k).with_prec(prec)
}

/// Natural logarithm of a positive number.
pub fn ln(x: &Real) -> Real {
    assert!(x.signum() > 0, "ln of non-positive number");
    let prec = x.prec();
    let w = prec + GUARD;
    let e = x.magnitude();
    let y = x.ldexp(-e).with_prec(w);
    let mut z = Real::from_f64(y.to_f64().ln(), w);
    for _ in 0..12 {
        let ez = exp(&z);
        let corr = (&y - &ez).ldexp(1) / (&y + &ez);
        let small = corr.is_zero() || corr.magnitude() < -(w as i64) + 2;
        z = &z + &corr;
        if small {
            break;
        }
    }
    (z + ln2(w).mul_i64(e)).with_prec(prec)
}

/// `(cos x, sin x)`.
pub fn cos_sin(x: &Real) -> (Real, Real) {
    let prec = x.prec();
    let w = prec + GUARD;
    if x.is_zero() {
        return (Real::one(prec), Real::zero(prec));
    }
    let mag = x.magnitude().max(1) as u32;
    let wp = w + mag;
    let half_pi = pi(wp).ldexp(-1);
    let k = (x.clone().with_prec(wp) / &half_pi).round();
    let r = (x.clone().with_prec(wp) - &half_pi * Real::from_bigint(&k, wp)).with_prec(w);
    let s = 10;
    let r = r.ldexp(-s);
    let mut c = Real::one(w);
    let mut sn = Real::zero(w);
    let mut term = Real::one(w);
    let mut j = 1i64;
    loop {
        term = (&term * &r).div_i64(j);
        if term.is_zero() || term.magnitude() < -(w as i64) - 4 {
            break;
        }
        match j % 4 {
            0 => c = &c + &term,
            1 => sn = &sn + &term,
            2 => c = &c - &term,
            _ => sn = &sn - &term,
        }
        j += 1;
    }
    for _ in 0..s {
        let c2 = &c.square() - &sn.square();
        sn = (&c * &sn).ldexp(1);
        c = c2;
    }
    let q = (k % BigInt::from(4) + BigInt::from(4)) % BigInt::from(4);
    let q: u32 = q.try_into().unwrap();
    let (c, sn) = match q {
        0 => (c, sn),
        1 => (-sn, c),
        2 => (-c, -sn),
        _ => (sn, -c),
    };
    (c.with_prec(prec), sn.with_prec(prec))
}

/// `atan2(y, x)` in `(-pi, pi]` via Newton iteration on `cos_sin`.
pub fn atan2(y: &Real, x: &Real) -> Real {
    let prec = y.prec().max(x.prec());
    let w = prec + GUARD;
    assert!(!(x.is_zero() && y.is_zero()), "atan2(0, 0)");
    let r = (x.square() + y.square()).sqrt().with_prec(w);
    let (yn, xn) = (y.clone().with_prec(w) / &r, x.clone().with_prec(w) / &r);
    let mut t = Real::from_f64(yn.to_f64().atan2(xn.to_f64()), w);
    for _ in 0..12 {
        let (c, s) = cos_sin(&t);
        // rotate the target by -t; the residual angle is small
        let dy = &(&yn * &c) - &(&xn * &s);
        let small = dy.is_zero() || dy.magnitude() < -(w as i64) + 2;
        t = &t + &dy;
        if small {
            break;
        }
    }
    t.with_prec(prec)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pi_digits() {
        assert_eq!(pi(128).to_decimal(35), "3.14159265358979323846264338327950288");
    }

    #[test]
    fn ln2_digits() {
        assert_eq!(ln2(128).to_decimal(30), "0.693147180559945309417232121458");
    }

    #[test]
    fn exp_ln_roundtrip() {
        let one = Real::one(200);
        assert_eq!(exp(&one).to_decimal(40), "2.7182818284590452353602874713526624977572");
        for v in [0.3, 5.0, 123.25, 1e-9] {
            let x = Real::from_f64(v, 200);
            let back = ln(&exp(&x));
            assert!((&back - &x).abs().magnitude() < -185, "{v}");
        }
        let x = Real::from_f64(-40.5, 200);
        assert!((ln(&exp(&x)) - &x).abs().magnitude() < -185);
    }

    #[test]
    fn trig_identities() {
        let x = Real::from_f64(100.7, 192);
        let (c, s) = cos_sin(&x);
        assert!((&c.square() + &s.square() - Real::one(192)).abs().magnitude() < -180);
        assert!((c.to_f64() - 100.7f64.cos()).abs() < 1e-12);
        assert!((s.to_f64() - 100.7f64.sin()).abs() < 1e-12);
        let (c, s) = cos_sin(&pi(192).ldexp(-2));
        assert!((&c - &s).abs().magnitude() < -185);
    }

    #[test]
    fn atan2_quadrants() {
        for (y, x) in [(1.0, 1.0), (1.0, -2.0), (-3.0, -1.0), (-0.5, 4.0), (0.0, -1.0)] {
            let a = atan2(&Real::from_f64(y, 128), &Real::from_f64(x, 128));
            assert!((a.to_f64() - f64::atan2(y, x)).abs() < 1e-15, "{y} {x}");
        }
    }
}
