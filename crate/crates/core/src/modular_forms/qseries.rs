use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::hg_datum::Rational;

use super::ModularError;

/// Largest number of coefficients any q-series may carry.
pub const MAX_TERMS: usize = 1_000_000;

/// Truncated q-expansion: coefficient `coeffs[j]` multiplies `q^(lead + j * stride)`,
/// valid for all exponents below `lead + coeffs.len() * stride`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QSeries {
    pub lead: Rational,
    pub stride: Rational,
    pub coeffs: Vec<BigInt>,
}

impl QSeries {
    pub fn new(lead: Rational, stride: Rational, coeffs: Vec<BigInt>) -> Self {
        assert!(stride > Rational::zero());
        QSeries { lead, stride, coeffs }
    }

    pub fn one(n: usize) -> Self {
        let mut c = vec![BigInt::zero(); n];
        if n > 0 {
            c[0] = BigInt::one();
        }
        QSeries::new(Rational::zero(), Rational::one(), c)
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// First exponent not determined by the stored coefficients.
    pub fn valid_to(&self) -> Rational {
        self.lead + self.stride * Rational::from_integer(self.coeffs.len() as i64)
    }

    /// Coefficient of `q^e`, or `None` past the truncation.
    pub fn coeff(&self, e: Rational) -> Option<BigInt> {
        if e >= self.valid_to() {
            return None;
        }
        let j = (e - self.lead) / self.stride;
        if e < self.lead || !j.is_integer() {
            return Some(BigInt::zero());
        }
        Some(self.coeffs[j.to_integer() as usize].clone())
    }

    /// Coefficient of `q^n` for an integer `n`.
    pub fn coeff_int(&self, n: i64) -> Option<BigInt> {
        self.coeff(Rational::from_integer(n))
    }

    /// Substitute `tau -> r * tau`.
    pub fn rescale(&self, r: Rational) -> Self {
        assert!(r > Rational::zero());
        QSeries::new(self.lead * r, self.stride * r, self.coeffs.clone())
    }

    pub fn truncate(mut self, n: usize) -> Self {
        self.coeffs.truncate(n);
        self
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        QSeries::new(self.lead, self.stride, self.coeffs.iter().map(|c| c * k).collect())
    }

    /// Rewrite with a finer stride `s` (the old stride must be a multiple of it).
    fn refine(&self, s: Rational) -> Self {
        let m = self.stride / s;
        assert!(m.is_integer());
        let m = m.to_integer() as usize;
        if m == 1 {
            return self.clone();
        }
        let mut c = vec![BigInt::zero(); self.coeffs.len() * m];
        for (j, v) in self.coeffs.iter().enumerate() {
            c[j * m] = v.clone();
        }
        QSeries::new(self.lead, s, c)
    }

    fn common_stride(a: Rational, b: Rational) -> Rational {
        let num = a.numer().gcd(b.numer());
        let den = a.denom().lcm(b.denom());
        Rational::new(num, den)
    }

    fn align(&self, o: &QSeries) -> Result<(QSeries, QSeries), ModularError> {
        let s = Self::common_stride(self.stride, o.stride);
        let (a, b) = (self.refine(s), o.refine(s));
        if !((a.lead - b.lead) / s).is_integer() {
            return Err(ModularError::IncompatibleExponents);
        }
        Ok((a, b))
    }

    pub fn add(&self, o: &QSeries) -> Result<QSeries, ModularError> {
        let (a, b) = self.align(o)?;
        let s = a.stride;
        let lead = a.lead.min(b.lead);
        let end = a.valid_to().min(b.valid_to());
        let n = ((end - lead) / s).to_integer().max(0) as usize;
        let mut c = vec![BigInt::zero(); n];
        for x in [&a, &b] {
            let off = ((x.lead - lead) / s).to_integer() as usize;
            for (j, v) in x.coeffs.iter().enumerate() {
                if off + j < n {
                    c[off + j] += v;
                }
            }
        }
        Ok(QSeries::new(lead, s, c))
    }

    pub fn neg(&self) -> QSeries {
        self.scale(&BigInt::from(-1))
    }

    pub fn sub(&self, o: &QSeries) -> Result<QSeries, ModularError> {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &QSeries) -> Result<QSeries, ModularError> {
        let s = Self::common_stride(self.stride, o.stride);
        let (a, b) = (self.refine(s), o.refine(s));
        let n = a.len().min(b.len());
        Ok(QSeries::new(a.lead + b.lead, s, mul_trunc(&a.coeffs, &b.coeffs, n)))
    }

    /// Integer power; negative exponents need the leading coefficient to be a unit.
    pub fn pow(&self, r: i64) -> Result<QSeries, ModularError> {
        let lead_pos = self.coeffs.iter().position(|c| !c.is_zero()).ok_or(ModularError::InexactDivision)?;
        let lead = self.lead + self.stride * Rational::from_integer(lead_pos as i64);
        let body = &self.coeffs[lead_pos..];
        let c = unit_power(body, r, body.len())?;
        Ok(QSeries::new(lead * Rational::from_integer(r), self.stride, c))
    }

    pub fn div(&self, o: &QSeries) -> Result<QSeries, ModularError> {
        self.mul(&o.pow(-1)?)
    }
}

pub(crate) fn mul_trunc(a: &[BigInt], b: &[BigInt], n: usize) -> Vec<BigInt> {
    let mut c = vec![BigInt::zero(); n];
    for (i, x) in a.iter().enumerate().take(n) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(n - i) {
            if !y.is_zero() {
                c[i + j] += x * y;
            }
        }
    }
    c
}

/// `f^r` for `f[0]` nonzero, via the recurrence `n f0 g_n = sum_k ((r+1)k - n) f_k g_{n-k}`.
/// Every division must be exact.
fn unit_power(f: &[BigInt], r: i64, n: usize) -> Result<Vec<BigInt>, ModularError> {
    if n == 0 {
        return Ok(vec![]);
    }
    let f0 = &f[0];
    let g0 = if r >= 0 {
        f0.pow(r as u32)
    } else {
        if !f0.abs().is_one() {
            return Err(ModularError::InexactDivision);
        }
        f0.pow((-r) as u32)
    };
    let mut g = vec![g0];
    let nz: Vec<usize> = (1..f.len().min(n)).filter(|&k| !f[k].is_zero()).collect();
    for m in 1..n {
        let mut s = BigInt::zero();
        for &k in &nz {
            if k > m {
                break;
            }
            s += BigInt::from((r + 1) * k as i64 - m as i64) * &f[k] * &g[m - k];
        }
        let d = f0 * BigInt::from(m as i64);
        let (q, rem) = s.div_rem(&d);
        if !rem.is_zero() {
            return Err(ModularError::InexactDivision);
        }
        g.push(q);
    }
    Ok(g)
}

/// `prod_{n >= 1} (1 - x^n)` to `n` coefficients by the pentagonal number theorem.
pub fn euler_product(n: usize) -> Vec<BigInt> {
    let mut c = vec![BigInt::zero(); n];
    if n == 0 {
        return c;
    }
    c[0] = BigInt::one();
    let mut k: i64 = 1;
    loop {
        let sign = if k % 2 == 0 { 1 } else { -1 };
        let e1 = (k * (3 * k - 1) / 2) as usize;
        let e2 = (k * (3 * k + 1) / 2) as usize;
        if e1 >= n {
            break;
        }
        c[e1] += sign;
        if e2 < n {
            c[e2] += sign;
        }
        k += 1;
    }
    c
}

/// Eta quotient `prod eta(delta tau)^r` with `n` coefficients in its natural stride.
pub fn eta_quotient(spec: &[(Rational, i64)], n: usize) -> Result<QSeries, ModularError> {
    if n > MAX_TERMS {
        return Err(ModularError::TruncationTooLarge(n));
    }
    if spec.iter().any(|(d, _)| *d <= Rational::zero()) {
        return Err(ModularError::BadEtaSpec);
    }
    let den = spec.iter().fold(1i64, |acc, (d, _)| acc.lcm(d.denom()));
    let stride = Rational::new(1, den);
    let lead = spec.iter().fold(Rational::zero(), |acc, (d, r)| acc + d * Rational::from_integer(*r)) / Rational::from_integer(24);
    let core = euler_product(n);
    let mut acc = vec![BigInt::zero(); n];
    if n > 0 {
        acc[0] = BigInt::one();
    }
    for (d, r) in spec {
        let e = (d * Rational::from_integer(den)).to_integer() as usize;
        let mut spread = vec![BigInt::zero(); n];
        for (j, c) in core.iter().enumerate() {
            if j * e >= n {
                break;
            }
            spread[j * e] = c.clone();
        }
        let p = unit_power(&spread, *r, n)?;
        acc = mul_trunc(&acc, &p, n);
    }
    Ok(QSeries::new(lead, stride, acc))
}

/// Parse a compact eta product such as `"2^4 4^4"` or `"1/2^12"` into `(delta, r)` pairs.
pub fn parse_eta_spec(s: &str) -> Result<Vec<(Rational, i64)>, ModularError> {
    s.split_whitespace()
        .map(|t| {
            let (d, r) = t.split_once('^').ok_or(ModularError::BadEtaSpec)?;
            let d = crate::hg_datum::parse_rational(d).map_err(|_| ModularError::BadEtaSpec)?;
            let r: i64 = r.parse().map_err(|_| ModularError::BadEtaSpec)?;
            Ok((d, r))
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpecialSeries {
    Theta2,
    Theta3,
    Theta4,
    E2,
    Lambda,
    T2,
    T3,
}

impl std::str::FromStr for SpecialSeries {
    type Err = ModularError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "theta2" => SpecialSeries::Theta2,
            "theta3" => SpecialSeries::Theta3,
            "theta4" => SpecialSeries::Theta4,
            "E2" | "e2" => SpecialSeries::E2,
            "lambda" => SpecialSeries::Lambda,
            "t2" => SpecialSeries::T2,
            "t3" => SpecialSeries::T3,
            _ => return Err(ModularError::UnknownSeries(s.into())),
        })
    }
}

fn r(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

/// Classical q-series, with `n` coefficients in the natural stride of each.
pub fn special_series(id: SpecialSeries, n: usize) -> Result<QSeries, ModularError> {
    if n > 100_000 {
        return Err(ModularError::TruncationTooLarge(n));
    }
    let eta = |s: &[(Rational, i64)], m: usize| eta_quotient(s, m);
    Ok(match id {
        SpecialSeries::Theta2 => eta(&[(r(2, 1), 2), (r(1, 1), -1)], n)?.scale(&BigInt::from(2)),
        SpecialSeries::Theta3 => eta(&[(r(1, 1), 5), (r(1, 2), -2), (r(2, 1), -2)], n)?,
        SpecialSeries::Theta4 => eta(&[(r(1, 2), 2), (r(1, 1), -1)], n)?,
        SpecialSeries::E2 => {
            let mut c = vec![BigInt::zero(); n];
            if n > 0 {
                c[0] = BigInt::one();
            }
            for d in 1..n {
                for m in (d..n).step_by(d) {
                    c[m] -= 24 * d as i64;
                }
            }
            QSeries::new(Rational::zero(), Rational::one(), c)
        }
        SpecialSeries::Lambda => {
            // theta2^4 / theta3^4 = 16 eta(tau/2)^8 eta(2tau)^16 / eta(tau)^24
            eta(&[(r(1, 2), 8), (r(2, 1), 16), (r(1, 1), -24)], n)?.scale(&BigInt::from(16))
        }
        SpecialSeries::T2 => eta(&[(r(2, 1), 24), (r(1, 1), -24)], n)?.scale(&BigInt::from(-64)),
        SpecialSeries::T3 => {
            // 108 y / (1 + 27 y)^2 with y = eta(3tau)^12 / eta(tau)^12
            let y = eta(&[(r(3, 1), 12), (r(1, 1), -12)], n)?;
            let den = QSeries::one(n + 1).add(&y.scale(&BigInt::from(27)))?.pow(-2)?;
            y.scale(&BigInt::from(108)).mul(&den)?.truncate(n)
        }
    })
}

/// Sum of divisors helper used by tests and `E2`.
pub fn sigma1(n: u64) -> u64 {
    (1..=n).filter(|d| n % d == 0).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    fn to_i64_vec(c: &[BigInt]) -> Option<Vec<i64>> {
        c.iter().map(|x| x.to_i64()).collect()
    }

    fn ints(q: &QSeries, k: usize) -> Vec<i64> {
        to_i64_vec(&q.coeffs[..k]).unwrap()
    }

    #[test]
    fn pentagonal() {
        assert_eq!(ints(&eta_quotient(&[(r(1, 1), 1)], 13).unwrap(), 13), vec![1, -1, -1, 0, 0, 1, 0, 1, 0, 0, 0, 0, -1]);
    }

    #[test]
    fn eta4_six_and_level8() {
        let f = eta_quotient(&[(r(4, 1), 6)], 40).unwrap();
        assert_eq!(f.lead, r(1, 1));
        assert_eq!(f.coeff_int(1).unwrap(), BigInt::from(1));
        // q (1 - 6 q^4 + 9 q^8 + ...)
        assert_eq!(f.coeff_int(5).unwrap(), BigInt::from(-6));
        assert_eq!(f.coeff_int(9).unwrap(), BigInt::from(9));
        assert_eq!(f.coeff_int(7).unwrap(), BigInt::from(0));
        let g = eta_quotient(&[(r(2, 1), 4), (r(4, 1), 4)], 10).unwrap();
        let got: Vec<i64> = (1..=7).map(|n| g.coeff_int(n).unwrap().to_i64().unwrap()).collect();
        assert_eq!(got, vec![1, 0, -4, 0, -2, 0, 24]);
    }

    #[test]
    fn negative_powers_and_inexact() {
        let e = eta_quotient(&[(r(1, 1), 1)], 30).unwrap();
        let inv = e.pow(-1).unwrap();
        // 1/prod(1-q^n) is the partition generating function
        assert_eq!(ints(&inv, 10), vec![1, 1, 2, 3, 5, 7, 11, 15, 22, 30]);
        let two = QSeries::new(r(0, 1), r(1, 1), vec![BigInt::from(2), BigInt::from(1)]);
        assert_eq!(two.pow(-1), Err(ModularError::InexactDivision));
    }

    #[test]
    fn theta_series() {
        let t3 = special_series(SpecialSeries::Theta3, 20).unwrap();
        assert_eq!(t3.stride, r(1, 2));
        for (k, want) in [(0, 1), (1, 2), (2, 0), (4, 2), (9, 2), (8, 0)] {
            assert_eq!(t3.coeffs[k], BigInt::from(want), "index {k}");
        }
        let t2 = special_series(SpecialSeries::Theta2, 20).unwrap();
        assert_eq!(t2.lead, r(1, 8));
        assert_eq!(ints(&t2, 4), vec![2, 2, 0, 2]);
        let t4 = special_series(SpecialSeries::Theta4, 20).unwrap();
        assert_eq!(ints(&t4, 5), vec![1, -2, 0, 0, 2]);
    }

    #[test]
    fn jacobi_identity() {
        let n = 200;
        let p4 = |s| special_series(s, n).unwrap().pow(4).unwrap();
        let lhs = p4(SpecialSeries::Theta3);
        let rhs = p4(SpecialSeries::Theta2).add(&p4(SpecialSeries::Theta4)).unwrap();
        let d = lhs.sub(&rhs).unwrap();
        assert!(d.valid_to() >= r(50, 1));
        assert!(d.coeffs.iter().all(Zero::is_zero));
    }

    #[test]
    fn hauptmoduln() {
        let t2 = special_series(SpecialSeries::T2, 10).unwrap();
        assert_eq!(t2.lead, r(1, 1));
        // -64 q prod (1 + q^n)^24
        assert_eq!(ints(&t2, 3), vec![-64, -1536, -19200]);
        let lam = special_series(SpecialSeries::Lambda, 10).unwrap();
        assert_eq!(lam.lead, r(1, 2));
        assert_eq!(ints(&lam, 3), vec![16, -128, 704]);
        let t3 = special_series(SpecialSeries::T3, 10).unwrap();
        assert_eq!(t3.lead, r(1, 1));
        assert_eq!(t3.coeffs[0], BigInt::from(108));
        let e2 = special_series(SpecialSeries::E2, 6).unwrap();
        assert_eq!(ints(&e2, 6), vec![1, -24, -72, -96, -168, -144]);
        assert_eq!(sigma1(6), 12);
    }

    #[test]
    fn add_with_fractional_offsets() {
        let a = QSeries::new(r(1, 2), r(1, 1), vec![BigInt::from(1); 4]);
        let b = QSeries::new(r(0, 1), r(1, 2), vec![BigInt::from(1); 4]);
        let s = a.add(&b).unwrap();
        assert_eq!(s.stride, r(1, 2));
        assert_eq!(s.valid_to(), r(2, 1));
        assert_eq!(s.coeff(r(1, 2)).unwrap(), BigInt::from(2));
        let c = QSeries::new(r(1, 3), r(1, 1), vec![BigInt::from(1)]);
        assert_eq!(a.add(&c), Err(ModularError::IncompatibleExponents));
    }
}
