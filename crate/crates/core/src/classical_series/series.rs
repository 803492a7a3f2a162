use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::hg_datum::Rational;

use super::SeriesError;

pub(crate) fn big(r: Rational) -> BigRational {
    BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
}

/// `(a)_k = a (a+1) ... (a+k-1)`.
pub fn pochhammer(a: &BigRational, k: usize) -> BigRational {
    let mut acc = BigRational::one();
    let mut x = a.clone();
    for _ in 0..k {
        acc *= &x;
        x += BigRational::one();
    }
    acc
}

/// Residue of a rational modulo `m`, when its denominator is a unit.
pub fn rational_mod(r: &BigRational, m: &BigInt) -> Option<BigInt> {
    let d = r.denom().mod_floor(m);
    let g = d.extended_gcd(m);
    if !g.gcd.is_one() {
        return None;
    }
    Some((r.numer().mod_floor(m) * g.x).mod_floor(m))
}

fn nonpositive_integer(x: &BigRational) -> Option<usize> {
    if x.is_integer() && !x.is_positive() {
        (-x.to_integer()).to_usize()
    } else {
        None
    }
}

/// `sum_(k=0)^n t_k` of the series at `z`, exactly.
pub fn hgs_truncated(spec: &SeriesSpec, z: &BigRational, n: usize) -> Result<BigRational, SeriesError> {
    spec.truncated(z, n)
}

/// `pFq(upper; lower; z) = sum_k prod (a_i)_k / prod (b_j)_k z^k / k!`.
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesSpec {
    pub upper: Vec<BigRational>,
    /// lower parameters without the implicit `1` of `k!`
    pub lower: Vec<BigRational>,
}

impl SeriesSpec {
    pub fn new(upper: &[Rational], lower: &[Rational]) -> Self {
        SeriesSpec { upper: upper.iter().map(|&r| big(r)).collect(), lower: lower.iter().map(|&r| big(r)).collect() }
    }

    pub fn from_big(upper: Vec<BigRational>, lower: Vec<BigRational>) -> Self {
        SeriesSpec { upper, lower }
    }

    /// `F(alpha, beta)` in datum form: `beta` lists the `1` that becomes `k!`.
    pub fn from_datum(alpha: &[Rational], beta: &[Rational]) -> Result<Self, SeriesError> {
        let one = Rational::from_integer(1);
        let pos = beta.iter().position(|&b| b == one).ok_or(SeriesError::BadParameters)?;
        let mut lower = beta.to_vec();
        lower.remove(pos);
        Ok(SeriesSpec::new(alpha, &lower))
    }

    /// Index after which every term vanishes, if an upper parameter is a nonpositive integer.
    pub fn terminates_at(&self) -> Option<usize> {
        self.upper.iter().filter_map(nonpositive_integer).min()
    }

    /// `sigma = sum(lower) + 1 - sum(upper)`; the series at `1` converges iff `sigma > 1`.
    pub fn sigma(&self) -> BigRational {
        let s: BigRational = self.lower.iter().sum();
        let a: BigRational = self.upper.iter().sum();
        s + BigRational::one() - a
    }

    /// Ratio `t_(k+1) / t_k` without the argument.
    pub fn ratio(&self, k: usize) -> Result<BigRational, SeriesError> {
        let kk = BigRational::from_integer(BigInt::from(k));
        let mut num = BigRational::one();
        for a in &self.upper {
            num *= a + &kk;
        }
        let mut den = &kk + BigRational::one();
        for b in &self.lower {
            den *= b + &kk;
        }
        if den.is_zero() {
            return Err(SeriesError::DenominatorPole { k: k + 1 });
        }
        Ok(num / den)
    }

    /// Exact terms `t_0, ..., t_n` at `z`, stopping early once the series terminates.
    pub fn terms(&self, z: &BigRational, n: usize) -> Result<Vec<BigRational>, SeriesError> {
        let mut out = vec![BigRational::one()];
        let stop = self.terminates_at().unwrap_or(usize::MAX).min(n);
        for k in 0..stop {
            let t = &out[k] * self.ratio(k)? * z;
            out.push(t);
        }
        Ok(out)
    }

    /// Truncation `sum_(k=0)^n t_k` in exact rationals.
    pub fn truncated(&self, z: &BigRational, n: usize) -> Result<BigRational, SeriesError> {
        Ok(self.terms(z, n)?.into_iter().sum())
    }

    /// Full sum of a terminating series at `z`.
    pub fn terminating_sum(&self, z: &BigRational) -> Result<BigRational, SeriesError> {
        let n = self.terminates_at().ok_or(SeriesError::NonTerminating)?;
        self.truncated(z, n)
    }

    /// Coefficients of the series in `x` up to `x^n`.
    pub fn power_series(&self, n: usize) -> Result<PowerSeries, SeriesError> {
        let mut c = self.terms(&BigRational::one(), n)?;
        c.resize(n + 1, BigRational::zero());
        Ok(PowerSeries { c })
    }
}

/// Power series truncated at a fixed order, with exact rational coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct PowerSeries {
    pub c: Vec<BigRational>,
}

impl PowerSeries {
    pub fn zero(order: usize) -> Self {
        PowerSeries { c: vec![BigRational::zero(); order + 1] }
    }

    pub fn one(order: usize) -> Self {
        let mut s = Self::zero(order);
        s.c[0] = BigRational::one();
        s
    }

    pub fn from_coeffs(mut c: Vec<BigRational>, order: usize) -> Self {
        c.resize(order + 1, BigRational::zero());
        PowerSeries { c }
    }

    pub fn order(&self) -> usize {
        self.c.len() - 1
    }

    pub fn add(&self, o: &PowerSeries) -> PowerSeries {
        let n = self.order().min(o.order());
        PowerSeries { c: (0..=n).map(|i| &self.c[i] + &o.c[i]).collect() }
    }

    pub fn scale(&self, k: &BigRational) -> PowerSeries {
        PowerSeries { c: self.c.iter().map(|v| v * k).collect() }
    }

    pub fn mul(&self, o: &PowerSeries) -> PowerSeries {
        let n = self.order().min(o.order());
        let mut c = vec![BigRational::zero(); n + 1];
        for (i, a) in self.c.iter().enumerate().take(n + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate().take(n + 1 - i) {
                c[i + j] += a * b;
            }
        }
        PowerSeries { c }
    }

    /// Multiplicative inverse; needs a nonzero constant term.
    pub fn inv(&self) -> Option<PowerSeries> {
        if self.c[0].is_zero() {
            return None;
        }
        let n = self.order();
        let mut r = vec![BigRational::zero(); n + 1];
        r[0] = self.c[0].recip();
        for k in 1..=n {
            let mut s = BigRational::zero();
            for j in 1..=k {
                s += &self.c[j] * &r[k - j];
            }
            r[k] = -s * &r[0];
        }
        Some(PowerSeries { c: r })
    }

    /// `(1 + u)^e` for a rational exponent, where `self = 1 + u` and `u(0) = 0`.
    pub fn pow_rational(&self, e: &BigRational) -> Option<PowerSeries> {
        if !self.c[0].is_one() {
            return None;
        }
        let n = self.order();
        // f = self, g = f^e satisfies f g' = e f' g
        let mut g = vec![BigRational::zero(); n + 1];
        g[0] = BigRational::one();
        for k in 1..=n {
            // k g_k = sum_(j=1)^k (e j - (k - j)) f_j g_(k-j)
            let mut s = BigRational::zero();
            for j in 1..=k {
                let coef = e * BigRational::from_integer(BigInt::from(j)) - BigRational::from_integer(BigInt::from(k - j));
                s += coef * &self.c[j] * &g[k - j];
            }
            g[k] = s / BigRational::from_integer(BigInt::from(k));
        }
        Some(PowerSeries { c: g })
    }

    /// `sum_k a_k y^k` for `y` without constant term.
    pub fn compose(outer: &[BigRational], y: &PowerSeries) -> Option<PowerSeries> {
        if !y.c[0].is_zero() {
            return None;
        }
        let n = y.order();
        let mut acc = PowerSeries::zero(n);
        let mut pw = PowerSeries::one(n);
        for a in outer.iter().take(n + 1) {
            acc = acc.add(&pw.scale(a));
            pw = pw.mul(y);
        }
        Some(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn truncation_examples() {
        let s = SeriesSpec::new(&[r(1, 2)], &[]);
        assert_eq!(s.truncated(&BigRational::one(), 0).unwrap(), BigRational::one());
        // 2F1(-1, b; c; z) = 1 - b z / c
        let (b, c, z) = (r(2, 7), r(5, 3), r(3, 11));
        let s = SeriesSpec::new(&[r(-1, 1), b], &[c]);
        assert_eq!(s.truncated(&big(z), 1).unwrap(), big(Rational::from_integer(1) - b * z / c));
        assert_eq!(s.terminating_sum(&big(z)).unwrap(), big(Rational::from_integer(1) - b * z / c));
    }

    #[test]
    fn ahlgren_truncation_mod_25() {
        let s = SeriesSpec::new(&[r(1, 2); 3], &[r(1, 1); 2]);
        let v = s.truncated(&BigRational::one(), 4).unwrap();
        assert_eq!(rational_mod(&v, &BigInt::from(25)), Some(BigInt::from(19)));
    }

    #[test]
    fn pole_detected() {
        let s = SeriesSpec::new(&[r(1, 2)], &[r(-2, 1)]);
        assert_eq!(s.truncated(&BigRational::one(), 5), Err(SeriesError::DenominatorPole { k: 3 }));
    }

    #[test]
    fn series_algebra() {
        let one = BigRational::one();
        let x = PowerSeries::from_coeffs(vec![BigRational::zero(), one.clone()], 8);
        let f = PowerSeries::one(8).add(&x);
        let inv = f.inv().unwrap();
        assert_eq!(inv.mul(&f), PowerSeries::one(8));
        let h = f.pow_rational(&BigRational::new(1.into(), 2.into())).unwrap();
        assert_eq!(h.mul(&h), f);
    }
}
