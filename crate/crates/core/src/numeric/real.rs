use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Binary floating point number `mant * 2^exp` carrying a working precision in bits.
///
/// Results of arithmetic are rounded to nearest at the larger precision of the
/// two operands.
#[derive(Clone)]
pub struct Real {
    mant: BigInt,
    exp: i64,
    prec: u32,
}

fn shift_round(m: &BigInt, shift: u64) -> BigInt {
    if shift == 0 {
        return m.clone();
    }
    let half = BigInt::one() << (shift - 1);
    if m.is_negative() {
        -((-m + half) >> shift)
    } else {
        (m + half) >> shift
    }
}

impl Real {
    pub fn zero(prec: u32) -> Self {
        Real { mant: BigInt::zero(), exp: 0, prec }
    }

    pub fn one(prec: u32) -> Self {
        Self::from_i64(1, prec)
    }

    pub fn from_parts(mant: BigInt, exp: i64, prec: u32) -> Self {
        let mut r = Real { mant, exp, prec };
        r.normalize();
        r
    }

    pub fn from_i64(v: i64, prec: u32) -> Self {
        Self::from_parts(BigInt::from(v), 0, prec)
    }

    pub fn from_bigint(v: &BigInt, prec: u32) -> Self {
        Self::from_parts(v.clone(), 0, prec)
    }

    pub fn from_ratio(r: &BigRational, prec: u32) -> Self {
        Self::from_bigint(r.numer(), prec + 8).div(&Self::from_bigint(r.denom(), prec + 8)).with_prec(prec)
    }

    pub fn from_frac(n: i64, d: i64, prec: u32) -> Self {
        Self::from_i64(n, prec + 8).div(&Self::from_i64(d, prec + 8)).with_prec(prec)
    }

    pub fn from_f64(v: f64, prec: u32) -> Self {
        assert!(v.is_finite(), "non-finite f64");
        if v == 0.0 {
            return Self::zero(prec);
        }
        let bits = v.to_bits();
        let sign = if bits >> 63 == 1 { -1i64 } else { 1 };
        let e = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (m, ex) = if e == 0 { (frac, -1074) } else { (frac | (1u64 << 52), e - 1075) };
        Self::from_parts(BigInt::from(m) * sign, ex, prec)
    }

    fn normalize(&mut self) {
        if self.mant.is_zero() {
            self.exp = 0;
            return;
        }
        let b = self.mant.bits();
        if b > self.prec as u64 {
            let s = b - self.prec as u64;
            self.mant = shift_round(&self.mant, s);
            self.exp += s as i64;
        }
        let tz = self.mant.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            self.mant >>= tz;
            self.exp += tz as i64;
        }
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn with_prec(mut self, prec: u32) -> Self {
        self.prec = prec;
        self.normalize();
        self
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    pub fn signum(&self) -> i32 {
        match self.mant.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    /// Exponent of the leading bit plus one, so that `2^(mag-1) <= |x| < 2^mag`.
    /// Returns `i64::MIN` for zero.
    pub fn magnitude(&self) -> i64 {
        if self.is_zero() {
            i64::MIN
        } else {
            self.exp + self.mant.bits() as i64
        }
    }

    pub fn abs(&self) -> Self {
        Real { mant: self.mant.abs(), exp: self.exp, prec: self.prec }
    }

    pub fn ldexp(&self, k: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        Real { mant: self.mant.clone(), exp: self.exp + k, prec: self.prec }
    }

    pub fn add(&self, o: &Real) -> Real {
        let prec = self.prec.max(o.prec);
        if self.is_zero() {
            return o.clone().with_prec(prec);
        }
        if o.is_zero() {
            return self.clone().with_prec(prec);
        }
        let top = self.magnitude().max(o.magnitude());
        let floor = top - prec as i64 - 64;
        let align = |r: &Real| -> Option<(BigInt, i64)> {
            if r.magnitude() < floor {
                None
            } else if r.exp < floor {
                Some((&r.mant >> ((floor - r.exp) as u64), floor))
            } else {
                Some((r.mant.clone(), r.exp))
            }
        };
        match (align(self), align(o)) {
            (None, _) => o.clone().with_prec(prec),
            (_, None) => self.clone().with_prec(prec),
            (Some((ma, ea)), Some((mb, eb))) => {
                let e = ea.min(eb);
                let m = (ma << ((ea - e) as u64)) + (mb << ((eb - e) as u64));
                Real::from_parts(m, e, prec)
            }
        }
    }

    pub fn sub(&self, o: &Real) -> Real {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Real {
        Real { mant: -&self.mant, exp: self.exp, prec: self.prec }
    }

    pub fn mul(&self, o: &Real) -> Real {
        Real::from_parts(&self.mant * &o.mant, self.exp + o.exp, self.prec.max(o.prec))
    }

    pub fn mul_i64(&self, k: i64) -> Real {
        Real::from_parts(&self.mant * k, self.exp, self.prec)
    }

    pub fn div(&self, o: &Real) -> Real {
        assert!(!o.is_zero(), "division by zero");
        let prec = self.prec.max(o.prec);
        if self.is_zero() {
            return Real::zero(prec);
        }
        let want = prec as i64 + 2;
        let shift = (want + o.mant.bits() as i64 - self.mant.bits() as i64).max(0) as u64;
        let num = &self.mant << shift;
        let (q, r) = num.div_rem(&o.mant);
        // sticky bit keeps round-to-nearest honest
        let q = (q << 1u32) + if r.is_zero() { BigInt::zero() } else { r.signum() * o.mant.signum() };
        Real::from_parts(q, self.exp - shift as i64 - o.exp - 1, prec)
    }

    pub fn div_i64(&self, k: i64) -> Real {
        self.div(&Real::from_i64(k, self.prec))
    }

    pub fn sqrt(&self) -> Real {
        assert!(!self.is_negative(), "sqrt of negative number");
        if self.is_zero() {
            return self.clone();
        }
        let want = 2 * self.prec as i64 + 4;
        let mut k = (want - self.mant.bits() as i64).max(0);
        if (self.exp - k).rem_euclid(2) != 0 {
            k += 1;
        }
        let m = (&self.mant << (k as u64)).sqrt();
        Real::from_parts(m, (self.exp - k) / 2, self.prec)
    }

    pub fn square(&self) -> Real {
        self.mul(self)
    }

    pub fn powi(&self, n: i64) -> Real {
        if n < 0 {
            return Real::one(self.prec).div(&self.powi(-n));
        }
        let mut base = self.clone();
        let mut acc = Real::one(self.prec);
        let mut e = n as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.square();
            }
        }
        acc
    }

    /// Nearest integer (ties away from zero).
    pub fn round(&self) -> BigInt {
        if self.exp >= 0 {
            &self.mant << (self.exp as u64)
        } else {
            shift_round(&self.mant, (-self.exp) as u64)
        }
    }

    pub fn floor(&self) -> BigInt {
        if self.exp >= 0 {
            &self.mant << (self.exp as u64)
        } else {
            self.mant.clone() >> ((-self.exp) as u64)
        }
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let b = self.mant.bits() as i64;
        let (m, e) = if b > 60 {
            (&self.mant >> ((b - 60) as u64), self.exp + b - 60)
        } else {
            (self.mant.clone(), self.exp)
        };
        let mf = m.to_f64().unwrap_or(f64::NAN);
        if e > 2000 {
            return mf * f64::INFINITY;
        }
        if e < -2000 {
            return 0.0;
        }
        let mut v = mf;
        let mut e = e;
        while e > 0 {
            let s = e.min(1000);
            v *= 2f64.powi(s as i32);
            e -= s;
        }
        while e < 0 {
            let s = (-e).min(1000);
            v /= 2f64.powi(s as i32);
            e += s;
        }
        v
    }

    /// `round(x * 2^bits)`; exact for dyadic values with enough bits.
    pub fn to_fixed(&self, bits: u32) -> BigInt {
        self.ldexp(bits as i64).round()
    }

    /// Decimal rendering with `digits` digits after the point.
    pub fn to_decimal(&self, digits: usize) -> String {
        let scale = BigInt::from(10u32).pow(digits as u32);
        let scaled = Real::from_parts(&self.mant * &scale, self.exp, u32::MAX / 2).round();
        let neg = scaled.is_negative();
        let s = scaled.abs().to_string();
        let s = if s.len() <= digits { format!("{}{}", "0".repeat(digits + 1 - s.len()), s) } else { s };
        let (ip, fp) = s.split_at(s.len() - digits);
        let sign = if neg { "-" } else { "" };
        if digits == 0 {
            format!("{sign}{ip}")
        } else {
            format!("{sign}{ip}.{fp}")
        }
    }

    pub fn max(&self, o: &Real) -> Real {
        if self >= o { self.clone() } else { o.clone() }
    }

    pub fn min(&self, o: &Real) -> Real {
        if self <= o { self.clone() } else { o.clone() }
    }
}

impl PartialEq for Real {
    fn eq(&self, o: &Self) -> bool {
        self.cmp(o) == Ordering::Equal
    }
}

impl Eq for Real {}

impl PartialOrd for Real {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl Ord for Real {
    fn cmp(&self, o: &Self) -> Ordering {
        let (sa, sb) = (self.signum(), o.signum());
        if sa != sb {
            return sa.cmp(&sb);
        }
        if sa == 0 {
            return Ordering::Equal;
        }
        let e = self.exp.min(o.exp);
        let a = &self.mant << ((self.exp - e) as u64);
        let b = &o.mant << ((o.exp - e) as u64);
        a.cmp(&b)
    }
}

impl fmt::Debug for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:e}", self.to_f64())
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(((self.prec as f64) * std::f64::consts::LOG10_2) as usize);
        write!(f, "{}", self.to_decimal(digits))
    }
}

macro_rules! real_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<&Real> for &Real {
            type Output = Real;
            fn $m(self, o: &Real) -> Real {
                Real::$m(self, o)
            }
        }
        impl $tr<Real> for Real {
            type Output = Real;
            fn $m(self, o: Real) -> Real {
                Real::$m(&self, &o)
            }
        }
        impl $tr<&Real> for Real {
            type Output = Real;
            fn $m(self, o: &Real) -> Real {
                Real::$m(&self, o)
            }
        }
        impl $tr<Real> for &Real {
            type Output = Real;
            fn $m(self, o: Real) -> Real {
                Real::$m(self, &o)
            }
        }
    };
}

real_binop!(Add, add);
real_binop!(Sub, sub);
real_binop!(Mul, mul);
real_binop!(Div, div);

impl Neg for Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real::neg(&self)
    }
}

impl Neg for &Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real::neg(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_arithmetic() {
        let a = Real::from_i64(3, 128);
        let b = Real::from_i64(7, 128);
        assert_eq!((&a * &b).round(), BigInt::from(21));
        let q = &a / &b;
        assert!((q.to_f64() - 3.0 / 7.0).abs() < 1e-16);
        assert_eq!((&q * &b).round(), BigInt::from(3));
        assert_eq!((&a - &b).round(), BigInt::from(-4));
    }

    #[test]
    fn sqrt_two_digits() {
        let s = Real::from_i64(2, 200).sqrt();
        assert_eq!(s.to_decimal(30), "1.414213562373095048801688724210");
    }

    #[test]
    fn f64_roundtrip() {
        for v in [1.5, -0.1, 1e-300, 12345.678, -2.5e17] {
            assert_eq!(Real::from_f64(v, 64).to_f64(), v);
        }
    }

    #[test]
    fn add_far_apart() {
        let big = Real::from_i64(1, 64).ldexp(500);
        let tiny = Real::from_i64(1, 64).ldexp(-500);
        assert_eq!(&big + &tiny, big);
        assert_eq!((&tiny + &big).prec(), 64);
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(Real::from_frac(-1, 8, 64).to_decimal(4), "-0.1250");
        assert_eq!(Real::from_frac(1, 3, 64).to_decimal(5), "0.33333");
    }
}
