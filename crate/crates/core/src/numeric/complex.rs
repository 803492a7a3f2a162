use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use super::elementary::{atan2, cos_sin, exp, ln};
use super::Real;

#[derive(Clone, PartialEq)]
pub struct Complex {
    pub re: Real,
    pub im: Real,
}

impl Complex {
    pub fn new(re: Real, im: Real) -> Self {
        Complex { re, im }
    }

    pub fn zero(prec: u32) -> Self {
        Complex::new(Real::zero(prec), Real::zero(prec))
    }

    pub fn one(prec: u32) -> Self {
        Complex::new(Real::one(prec), Real::zero(prec))
    }

    pub fn i(prec: u32) -> Self {
        Complex::new(Real::zero(prec), Real::one(prec))
    }

    pub fn from_real(re: Real) -> Self {
        let p = re.prec();
        Complex::new(re, Real::zero(p))
    }

    pub fn from_f64(re: f64, im: f64, prec: u32) -> Self {
        Complex::new(Real::from_f64(re, prec), Real::from_f64(im, prec))
    }

    pub fn prec(&self) -> u32 {
        self.re.prec().max(self.im.prec())
    }

    pub fn with_prec(self, prec: u32) -> Self {
        Complex::new(self.re.with_prec(prec), self.im.with_prec(prec))
    }

    /// `exp(i theta)`.
    pub fn cis(theta: &Real) -> Self {
        let (c, s) = cos_sin(theta);
        Complex::new(c, s)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Complex::new(self.re.clone(), -&self.im)
    }

    pub fn norm_sqr(&self) -> Real {
        &self.re.square() + &self.im.square()
    }

    pub fn abs(&self) -> Real {
        self.norm_sqr().sqrt()
    }

    pub fn arg(&self) -> Real {
        atan2(&self.im, &self.re)
    }

    pub fn scale(&self, k: &Real) -> Self {
        Complex::new(&self.re * k, &self.im * k)
    }

    pub fn mul_i64(&self, k: i64) -> Self {
        Complex::new(self.re.mul_i64(k), self.im.mul_i64(k))
    }

    pub fn div_i64(&self, k: i64) -> Self {
        Complex::new(self.re.div_i64(k), self.im.div_i64(k))
    }

    pub fn ldexp(&self, k: i64) -> Self {
        Complex::new(self.re.ldexp(k), self.im.ldexp(k))
    }

    pub fn mul_i(&self) -> Self {
        Complex::new(-&self.im, self.re.clone())
    }

    pub fn square(&self) -> Self {
        self * self
    }

    pub fn powi(&self, n: i64) -> Self {
        if n < 0 {
            return Complex::one(self.prec()) / self.powi(-n);
        }
        let mut base = self.clone();
        let mut acc = Complex::one(self.prec());
        let mut e = n as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = base.square();
            }
        }
        acc
    }

    pub fn exp(&self) -> Self {
        Complex::cis(&self.im).scale(&exp(&self.re))
    }

    /// Principal logarithm.
    pub fn ln(&self) -> Self {
        Complex::new(ln(&self.norm_sqr()).ldexp(-1), self.arg())
    }

    /// Principal square root.
    pub fn sqrt(&self) -> Self {
        let prec = self.prec();
        if self.is_zero() {
            return Complex::zero(prec);
        }
        let r = self.abs();
        let a = (&r + &self.re).abs().ldexp(-1).sqrt();
        let b = (&r - &self.re).abs().ldexp(-1).sqrt();
        if self.im.is_negative() {
            Complex::new(a, -b)
        } else {
            Complex::new(a, b)
        }
    }

    /// Largest of the binary magnitudes of the two parts.
    pub fn magnitude(&self) -> i64 {
        self.re.magnitude().max(self.im.magnitude())
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }
}

impl fmt::Debug for Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?} + {:?}i)", self.re, self.im)
    }
}

impl fmt::Display for Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = f.precision().unwrap_or(20);
        write!(f, "{} + {}i", self.re.to_decimal(d), self.im.to_decimal(d))
    }
}

impl Add<&Complex> for &Complex {
    type Output = Complex;
    fn add(self, o: &Complex) -> Complex {
        Complex::new(&self.re + &o.re, &self.im + &o.im)
    }
}

impl Sub<&Complex> for &Complex {
    type Output = Complex;
    fn sub(self, o: &Complex) -> Complex {
        Complex::new(&self.re - &o.re, &self.im - &o.im)
    }
}

impl Mul<&Complex> for &Complex {
    type Output = Complex;
    fn mul(self, o: &Complex) -> Complex {
        Complex::new(
            &(&self.re * &o.re) - &(&self.im * &o.im),
            &(&self.re * &o.im) + &(&self.im * &o.re),
        )
    }
}

impl Div<&Complex> for &Complex {
    type Output = Complex;
    fn div(self, o: &Complex) -> Complex {
        let d = o.norm_sqr();
        let n = self * &o.conj();
        Complex::new(&n.re / &d, &n.im / &d)
    }
}

macro_rules! owned_ops {
    ($tr:ident, $m:ident) => {
        impl $tr<Complex> for Complex {
            type Output = Complex;
            fn $m(self, o: Complex) -> Complex {
                (&self).$m(&o)
            }
        }
        impl $tr<&Complex> for Complex {
            type Output = Complex;
            fn $m(self, o: &Complex) -> Complex {
                (&self).$m(o)
            }
        }
        impl $tr<Complex> for &Complex {
            type Output = Complex;
            fn $m(self, o: Complex) -> Complex {
                self.$m(&o)
            }
        }
    };
}

owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);
owned_ops!(Div, div);

impl Neg for &Complex {
    type Output = Complex;
    fn neg(self) -> Complex {
        Complex::new(-&self.re, -&self.im)
    }
}

impl Neg for Complex {
    type Output = Complex;
    fn neg(self) -> Complex {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::pi;

    #[test]
    fn euler_identity() {
        let z = Complex::cis(&pi(160));
        assert!((&z.re + &Real::one(160)).abs().magnitude() < -150);
        assert!(z.im.abs().magnitude() < -150);
    }

    #[test]
    fn sqrt_and_ln() {
        let z = Complex::from_f64(-3.0, -4.0, 128);
        let s = z.sqrt();
        assert_eq!(s.to_f64(), (1.0, -2.0));
        let l = z.ln();
        let back = l.exp();
        assert!((&back - &z).magnitude() < -110);
    }

    #[test]
    fn division() {
        let a = Complex::from_f64(1.0, 2.0, 128);
        let b = Complex::from_f64(3.0, -1.0, 128);
        let q = &a / &b;
        let back = &q * &b;
        assert!((&back - &a).magnitude() < -120);
    }
}
