use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::PadicError;

/// `u * p^v` with `u` a unit modulo `p^k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PadicResidue {
    pub p: u64,
    pub k: u32,
    pub unit: BigInt,
    pub valuation: i64,
}

/// `p`-adic valuation of a nonzero integer, and the cofactor.
pub fn split_p(n: &BigInt, p: u64) -> (i64, BigInt) {
    let pb = BigInt::from(p);
    let mut v = 0;
    let mut m = n.clone();
    while !m.is_zero() && (&m % &pb).is_zero() {
        m /= &pb;
        v += 1;
    }
    (v, m)
}

pub fn inverse_mod(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let g = a.mod_floor(m).extended_gcd(m);
    g.gcd.is_one().then(|| g.x.mod_floor(m))
}

impl PadicResidue {
    fn modulus(p: u64, k: u32) -> BigInt {
        BigInt::from(p).pow(k)
    }

    /// Zero is represented with unit 0 and valuation `k`.
    pub fn from_rational(r: &BigRational, p: u64, k: u32) -> Self {
        let m = Self::modulus(p, k);
        if r.is_zero() {
            return PadicResidue { p, k, unit: BigInt::zero(), valuation: k as i64 };
        }
        let (vn, un) = split_p(r.numer(), p);
        let (vd, ud) = split_p(r.denom(), p);
        let inv = inverse_mod(&ud, &m).expect("cofactor is prime to p");
        PadicResidue { p, k, unit: (un * inv).mod_floor(&m), valuation: vn - vd }
    }

    pub fn from_int(n: i64, p: u64, k: u32) -> Self {
        Self::from_rational(&BigRational::from_integer(BigInt::from(n)), p, k)
    }

    pub fn is_zero(&self) -> bool {
        self.unit.is_zero()
    }

    pub fn mul(&self, o: &Self) -> Self {
        let m = Self::modulus(self.p, self.k);
        if self.is_zero() || o.is_zero() {
            return PadicResidue { unit: BigInt::zero(), valuation: self.k as i64, ..self.clone() };
        }
        PadicResidue { unit: (&self.unit * &o.unit).mod_floor(&m), valuation: self.valuation + o.valuation, ..self.clone() }
    }

    pub fn div(&self, o: &Self) -> Result<Self, PadicError> {
        if o.is_zero() {
            return Err(PadicError::NonUnitDenominator);
        }
        let m = Self::modulus(self.p, self.k);
        let inv = inverse_mod(&o.unit, &m).ok_or(PadicError::NonUnitDenominator)?;
        Ok(PadicResidue { unit: (&self.unit * inv).mod_floor(&m), valuation: self.valuation - o.valuation, ..self.clone() })
    }

    /// Sum, known modulo `p^(k + min valuation)`; the unit is renormalized.
    pub fn add(&self, o: &Self) -> Self {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let v = self.valuation.min(o.valuation);
        let m = Self::modulus(self.p, self.k);
        let pb = BigInt::from(self.p);
        let lift = |x: &Self| &x.unit * pb.pow((x.valuation - v) as u32);
        let s = (lift(self) + lift(o)).mod_floor(&m);
        if s.is_zero() {
            return PadicResidue { unit: BigInt::zero(), valuation: v + self.k as i64, ..self.clone() };
        }
        let (dv, u) = split_p(&s, self.p);
        PadicResidue { unit: u, valuation: v + dv, ..self.clone() }
    }

    /// The class in `Z/p^k`, defined only for nonnegative valuation.
    pub fn reduce(&self) -> Option<BigInt> {
        if self.valuation < 0 {
            return None;
        }
        let m = Self::modulus(self.p, self.k);
        if self.valuation >= self.k as i64 {
            return Some(BigInt::zero());
        }
        Some((&self.unit * BigInt::from(self.p).pow(self.valuation as u32)).mod_floor(&m))
    }

    pub fn is_unit(&self) -> bool {
        !self.is_zero() && self.valuation == 0 && !self.unit.is_negative()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn valuations_and_reduction() {
        let x = PadicResidue::from_rational(&q(50, 3), 5, 3);
        assert_eq!(x.valuation, 2);
        assert_eq!(x.reduce(), Some(BigInt::from((50 * 42) % 125)));
        let y = PadicResidue::from_rational(&q(1, 5), 5, 3);
        assert_eq!(y.valuation, -1);
        assert_eq!(y.reduce(), None);
        assert_eq!(x.mul(&y).valuation, 1);
        assert_eq!(x.div(&y).unwrap().valuation, 3);
        assert_eq!(x.div(&y).unwrap().reduce(), Some(BigInt::zero()));
        let s = PadicResidue::from_int(3, 5, 3).add(&PadicResidue::from_int(2, 5, 3));
        assert_eq!((s.valuation, s.unit.clone()), (1, BigInt::from(1)));
        assert!(PadicResidue::from_int(7, 5, 2).is_unit());
    }
}
