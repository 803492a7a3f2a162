use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::numeric::{pi, Complex, Real};

/// Tables for `Z[zeta_m] = Z[x]/Phi_m(x)`.
#[derive(Debug)]
struct Ring {
    m: u32,
    deg: usize,
    /// coefficients of `Phi_m`, low degree first, monic
    phi: Vec<i64>,
    /// `x^j mod Phi_m` for `j in [0, m)`
    red: Vec<Vec<i64>>,
}

/// Coefficients of the `m`-th cyclotomic polynomial, low degree first.
pub fn cyclotomic_poly(m: u32) -> Vec<i64> {
    // Phi_m = (x^m - 1) / prod_{d | m, d < m} Phi_d
    let mut num = vec![0i64; m as usize + 1];
    num[0] = -1;
    num[m as usize] = 1;
    for d in 1..m {
        if m % d == 0 {
            let den = cyclotomic_poly(d);
            num = poly_div_exact(&num, &den);
        }
    }
    num
}

fn poly_div_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let nd = num.len() - 1;
    let mut quo = vec![0i64; nd - dd + 1];
    for i in (0..=nd - dd).rev() {
        let c = rem[i + dd];
        quo[i] = c;
        for j in 0..=dd {
            rem[i + j] -= c * den[j];
        }
    }
    debug_assert!(rem.iter().all(|&c| c == 0));
    quo
}

fn ring(m: u32) -> Arc<Ring> {
    static RINGS: OnceLock<Mutex<HashMap<u32, Arc<Ring>>>> = OnceLock::new();
    let rings = RINGS.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(r) = rings.lock().unwrap().get(&m) {
        return r.clone();
    }
    assert!(m >= 1, "root of unity order must be positive");
    let phi = cyclotomic_poly(m);
    let deg = phi.len() - 1;
    let mut red = Vec::with_capacity(m as usize);
    let mut cur = vec![0i64; deg];
    if deg > 0 {
        cur[0] = 1;
    }
    for _ in 0..m {
        red.push(cur.clone());
        // multiply by x and reduce with the monic Phi_m
        let top = if deg > 0 { cur[deg - 1] } else { 0 };
        for i in (1..deg).rev() {
            cur[i] = cur[i - 1] - top * phi[i];
        }
        if deg > 0 {
            cur[0] = -top * phi[0];
        }
    }
    let r = Arc::new(Ring { m, deg, phi, red });
    rings.lock().unwrap().insert(m, r.clone());
    r
}

/// Euler's totient.
pub fn euler_phi(m: u32) -> u32 {
    ring(m).deg as u32
}

/// An element of `Z[zeta_M]` in the power basis `1, zeta, ..., zeta^(phi(M)-1)`.
///
/// Coefficients are `i128`; arithmetic panics on overflow in builds with
/// overflow checks, which the workspace enables for every profile.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycInt {
    m: u32,
    c: Vec<i128>,
}

impl CycInt {
    pub fn zero(m: u32) -> Self {
        CycInt { m, c: vec![0; euler_phi(m) as usize] }
    }

    pub fn from_int(m: u32, v: i128) -> Self {
        let mut z = Self::zero(m);
        z.c[0] = v;
        z
    }

    pub fn one(m: u32) -> Self {
        Self::from_int(m, 1)
    }

    /// `zeta_M^e`.
    pub fn zeta_pow(m: u32, e: i64) -> Self {
        let r = ring(m);
        let j = e.rem_euclid(m as i64) as usize;
        CycInt { m, c: r.red[j].iter().map(|&v| v as i128).collect() }
    }

    /// Element from raw power-basis coefficients (length must be `phi(M)`).
    pub fn from_coeffs(m: u32, c: Vec<i128>) -> Self {
        assert_eq!(c.len(), euler_phi(m) as usize, "coefficient vector length");
        CycInt { m, c }
    }

    pub fn order(&self) -> u32 {
        self.m
    }

    pub fn coeffs(&self) -> &[i128] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|&v| v == 0)
    }

    /// The integer value when the element lies in `Z`.
    pub fn to_rational_integer(&self) -> Option<i128> {
        if self.c[1..].iter().all(|&v| v == 0) {
            Some(self.c[0])
        } else {
            None
        }
    }

    pub fn scale(&self, k: i128) -> Self {
        CycInt { m: self.m, c: self.c.iter().map(|&v| v * k).collect() }
    }

    /// Multiplication by `zeta_M^e`.
    pub fn mul_zeta(&self, e: i64) -> Self {
        self * &CycInt::zeta_pow(self.m, e)
    }

    /// Image under the automorphism `zeta -> zeta^a`, `gcd(a, M) = 1`.
    pub fn galois(&self, a: i64) -> Self {
        let mut acc = GroupRing::new(self.m);
        for (j, &v) in self.c.iter().enumerate() {
            acc.add_at(a * j as i64, v);
        }
        acc.to_cyc()
    }

    pub fn conj(&self) -> Self {
        self.galois(-1)
    }

    /// Reinterprets the element inside `Z[zeta_{M k}]` via `zeta_M = zeta_{Mk}^k`.
    pub fn lift(&self, k: u32) -> Self {
        let mut acc = GroupRing::new(self.m * k);
        for (j, &v) in self.c.iter().enumerate() {
            acc.add_at(j as i64 * k as i64, v);
        }
        acc.to_cyc()
    }

    /// Rewrites an element of `Z[zeta_L]` lying in the subring `Z[zeta_m]`
    /// (`m | L`) in the power basis of `Z[zeta_m]`. `None` if it does not lie there.
    pub fn descend(&self, m: u32) -> Option<CycInt> {
        let big = self.m;
        if big % m != 0 {
            return None;
        }
        if big == m {
            return Some(self.clone());
        }
        let step = (big / m) as i64;
        let dm = euler_phi(m) as usize;
        let rows = self.c.len();
        // augmented system [v_0 .. v_(dm-1) | self], v_j = image of zeta_m^j
        let cols: Vec<CycInt> = (0..dm).map(|j| CycInt::zeta_pow(big, j as i64 * step)).collect();
        let mut a: Vec<Vec<BigRational>> = (0..rows)
            .map(|r| {
                let mut row: Vec<BigRational> =
                    cols.iter().map(|v| BigRational::from_integer(BigInt::from(v.c[r]))).collect();
                row.push(BigRational::from_integer(BigInt::from(self.c[r])));
                row
            })
            .collect();
        let mut piv_row = 0;
        let mut pivots = Vec::new();
        for col in 0..dm {
            let Some(r) = (piv_row..rows).find(|&r| !a[r][col].is_zero()) else {
                continue;
            };
            a.swap(piv_row, r);
            let inv = a[piv_row][col].recip();
            for k in col..=dm {
                a[piv_row][k] = &a[piv_row][k] * &inv;
            }
            for r2 in 0..rows {
                if r2 != piv_row && !a[r2][col].is_zero() {
                    let f = a[r2][col].clone();
                    for k in col..=dm {
                        let t = &f * &a[piv_row][k];
                        a[r2][k] -= t;
                    }
                }
            }
            pivots.push(col);
            piv_row += 1;
        }
        if a[piv_row..].iter().any(|row| !row[dm].is_zero()) {
            return None;
        }
        let mut out = vec![0i128; dm];
        for (r, &col) in pivots.iter().enumerate() {
            let v = &a[r][dm];
            if !v.is_integer() {
                return None;
            }
            out[col] = v.to_integer().to_i128()?;
        }
        Some(CycInt { m, c: out })
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = CycInt::one(self.m);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Value under the embedding `zeta_M -> exp(2 pi i / M)`.
    pub fn to_complex(&self, prec: u32) -> Complex {
        let w = prec + 16;
        let mut acc = Complex::zero(w);
        let two_pi = pi(w).ldexp(1);
        for (j, &v) in self.c.iter().enumerate() {
            if v != 0 {
                let theta = (&two_pi * &Real::from_i64(j as i64, w)).div_i64(self.m as i64);
                let z = Complex::cis(&theta);
                acc = &acc + &z.scale(&Real::from_bigint(&BigInt::from(v), w));
            }
        }
        acc.with_prec(prec)
    }

    pub fn to_c64(&self) -> (f64, f64) {
        let mut re = 0.0;
        let mut im = 0.0;
        for (j, &v) in self.c.iter().enumerate() {
            let t = 2.0 * std::f64::consts::PI * j as f64 / self.m as f64;
            re += v as f64 * t.cos();
            im += v as f64 * t.sin();
        }
        (re, im)
    }

    pub fn max_abs_coeff(&self) -> i128 {
        self.c.iter().map(|v| v.abs()).max().unwrap_or(0)
    }
}

impl fmt::Debug for CycInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for CycInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (j, &v) in self.c.iter().enumerate() {
            if v == 0 {
                continue;
            }
            terms.push(match j {
                0 => format!("{v}"),
                1 => format!("{v}*z"),
                _ => format!("{v}*z^{j}"),
            });
        }
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

impl Add<&CycInt> for &CycInt {
    type Output = CycInt;
    fn add(self, o: &CycInt) -> CycInt {
        assert_eq!(self.m, o.m, "cyclotomic order mismatch");
        CycInt { m: self.m, c: self.c.iter().zip(&o.c).map(|(a, b)| a + b).collect() }
    }
}

impl Sub<&CycInt> for &CycInt {
    type Output = CycInt;
    fn sub(self, o: &CycInt) -> CycInt {
        assert_eq!(self.m, o.m, "cyclotomic order mismatch");
        CycInt { m: self.m, c: self.c.iter().zip(&o.c).map(|(a, b)| a - b).collect() }
    }
}

impl Neg for &CycInt {
    type Output = CycInt;
    fn neg(self) -> CycInt {
        CycInt { m: self.m, c: self.c.iter().map(|a| -a).collect() }
    }
}

impl Mul<&CycInt> for &CycInt {
    type Output = CycInt;
    fn mul(self, o: &CycInt) -> CycInt {
        assert_eq!(self.m, o.m, "cyclotomic order mismatch");
        let r = ring(self.m);
        let d = r.deg;
        let mut prod = vec![0i128; 2 * d];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.c.iter().enumerate() {
                prod[i + j] += a * b;
            }
        }
        let mut out = prod[..d].to_vec();
        for (k, &v) in prod.iter().enumerate().skip(d) {
            if v != 0 {
                for (t, &rv) in r.red[k % r.m as usize].iter().enumerate() {
                    out[t] += v * rv as i128;
                }
            }
        }
        CycInt { m: self.m, c: out }
    }
}

macro_rules! owned {
    ($tr:ident, $f:ident) => {
        impl $tr<CycInt> for CycInt {
            type Output = CycInt;
            fn $f(self, o: CycInt) -> CycInt {
                (&self).$f(&o)
            }
        }
        impl $tr<&CycInt> for CycInt {
            type Output = CycInt;
            fn $f(self, o: &CycInt) -> CycInt {
                (&self).$f(o)
            }
        }
    };
}
owned!(Add, add);
owned!(Sub, sub);
owned!(Mul, mul);

/// Accumulator in the group ring `Z[C_M]`; converted to [`CycInt`] by reducing
/// modulo `Phi_M`. Sums of roots of unity are cheapest to collect here.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupRing {
    m: u32,
    c: Vec<i128>,
}

impl GroupRing {
    pub fn new(m: u32) -> Self {
        GroupRing { m, c: vec![0; m as usize] }
    }

    pub fn order(&self) -> u32 {
        self.m
    }

    pub fn add_at(&mut self, e: i64, v: i128) {
        let j = e.rem_euclid(self.m as i64) as usize;
        self.c[j] += v;
    }

    pub fn coeffs(&self) -> &[i128] {
        &self.c
    }

    pub fn to_cyc(&self) -> CycInt {
        let r = ring(self.m);
        let mut out = vec![0i128; r.deg];
        for (j, &v) in self.c.iter().enumerate() {
            if v != 0 {
                for (t, &rv) in r.red[j].iter().enumerate() {
                    out[t] += v * rv as i128;
                }
            }
        }
        CycInt { m: self.m, c: out }
    }
}

type QPoly = Vec<BigRational>;

fn qtrim(mut a: QPoly) -> QPoly {
    while a.len() > 1 && a.last().unwrap().is_zero() {
        a.pop();
    }
    if a.is_empty() {
        a.push(BigRational::zero());
    }
    a
}

fn qdeg(a: &QPoly) -> Option<usize> {
    if a.len() == 1 && a[0].is_zero() {
        None
    } else {
        Some(a.len() - 1)
    }
}

fn qsub(a: &QPoly, b: &QPoly) -> QPoly {
    let n = a.len().max(b.len());
    let z = BigRational::zero();
    qtrim((0..n).map(|i| a.get(i).unwrap_or(&z) - b.get(i).unwrap_or(&z)).collect())
}

fn qmul(a: &QPoly, b: &QPoly) -> QPoly {
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    qtrim(out)
}

fn qdivrem(a: &QPoly, b: &QPoly) -> (QPoly, QPoly) {
    let db = qdeg(b).expect("polynomial division by zero");
    let mut rem = a.clone();
    let mut quo = vec![BigRational::zero(); a.len().max(db + 1) - db];
    while let Some(dr) = qdeg(&rem) {
        if dr < db {
            break;
        }
        let c = &rem[dr] / &b[db];
        quo[dr - db] = c.clone();
        for j in 0..=db {
            let t = &c * &b[j];
            rem[dr - db + j] -= t;
        }
        rem = qtrim(rem);
    }
    (qtrim(quo), rem)
}

/// An element of `Q(zeta_M)` in the power basis with rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycRat {
    m: u32,
    c: Vec<BigRational>,
}

impl From<&CycInt> for CycRat {
    fn from(x: &CycInt) -> Self {
        CycRat { m: x.m, c: x.c.iter().map(|&v| BigRational::from_integer(BigInt::from(v))).collect() }
    }
}

impl CycRat {
    pub fn order(&self) -> u32 {
        self.m
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|v| v.is_zero())
    }

    fn reduce(m: u32, poly: &QPoly) -> Self {
        let r = ring(m);
        let phi: QPoly = r.phi.iter().map(|&v| BigRational::from_integer(BigInt::from(v))).collect();
        let (_, rem) = qdivrem(poly, &phi);
        let mut c = rem;
        c.resize(r.deg, BigRational::zero());
        CycRat { m, c }
    }

    pub fn mul(&self, o: &CycRat) -> CycRat {
        assert_eq!(self.m, o.m, "cyclotomic order mismatch");
        CycRat::reduce(self.m, &qmul(&self.c, &o.c))
    }

    pub fn add(&self, o: &CycRat) -> CycRat {
        assert_eq!(self.m, o.m, "cyclotomic order mismatch");
        CycRat { m: self.m, c: self.c.iter().zip(&o.c).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, o: &CycRat) -> CycRat {
        assert_eq!(self.m, o.m, "cyclotomic order mismatch");
        CycRat { m: self.m, c: self.c.iter().zip(&o.c).map(|(a, b)| a - b).collect() }
    }

    pub fn scale(&self, k: &BigRational) -> CycRat {
        CycRat { m: self.m, c: self.c.iter().map(|a| a * k).collect() }
    }

    /// Multiplicative inverse via the extended Euclidean algorithm against `Phi_M`.
    pub fn inv(&self) -> Option<CycRat> {
        if self.is_zero() {
            return None;
        }
        let r = ring(self.m);
        let phi: QPoly = r.phi.iter().map(|&v| BigRational::from_integer(BigInt::from(v))).collect();
        // invariant: s_i * a = r_i mod phi
        let (mut r0, mut r1) = (phi, qtrim(self.c.clone()));
        let (mut s0, mut s1): (QPoly, QPoly) = (vec![BigRational::zero()], vec![BigRational::one()]);
        while qdeg(&r1).is_some() {
            let (q, rem) = qdivrem(&r0, &r1);
            let s2 = qsub(&s0, &qmul(&q, &s1));
            r0 = std::mem::replace(&mut r1, rem);
            s0 = std::mem::replace(&mut s1, s2);
        }
        // r0 is the gcd; a unit since Phi_M is irreducible
        if qdeg(&r0) != Some(0) {
            return None;
        }
        let k = r0[0].recip();
        Some(CycRat::reduce(self.m, &s0).scale(&k))
    }

    pub fn div(&self, o: &CycRat) -> Option<CycRat> {
        o.inv().map(|i| self.mul(&i))
    }

    pub fn to_rational(&self) -> Option<BigRational> {
        if self.c[1..].iter().all(|v| v.is_zero()) {
            Some(self.c[0].clone())
        } else {
            None
        }
    }

    pub fn to_cyc_int(&self) -> Option<CycInt> {
        let c: Option<Vec<i128>> =
            self.c.iter().map(|v| if v.is_integer() { v.to_integer().to_i128() } else { None }).collect();
        c.map(|c| CycInt { m: self.m, c })
    }

    pub fn to_c64(&self) -> (f64, f64) {
        let mut re = 0.0;
        let mut im = 0.0;
        for (j, v) in self.c.iter().enumerate() {
            let t = 2.0 * std::f64::consts::PI * j as f64 / self.m as f64;
            let v = v.to_f64().unwrap_or(f64::NAN);
            re += v * t.cos();
            im += v * t.sin();
        }
        (re, im)
    }

    pub fn max_abs_numer(&self) -> BigInt {
        self.c.iter().map(|v| v.numer().abs()).max().unwrap_or_default()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(cyclotomic_poly(1), vec![-1, 1]);
        assert_eq!(cyclotomic_poly(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_poly(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_poly(12), vec![1, 0, -1, 0, 1]);
        assert_eq!(euler_phi(20), 8);
        assert_eq!(euler_phi(96), 32);
    }

    #[test]
    fn roots_of_unity_sum_to_zero() {
        for m in [3u32, 4, 6, 10, 12, 20, 48] {
            let mut acc = GroupRing::new(m);
            for e in 0..m {
                acc.add_at(e as i64, 1);
            }
            assert!(acc.to_cyc().is_zero(), "m={m}");
            let z = CycInt::zeta_pow(m, 1);
            assert_eq!(z.pow(m), CycInt::one(m));
        }
    }

    #[test]
    fn inverse_in_q_zeta() {
        let a = &CycInt::from_int(12, 3) + &CycInt::zeta_pow(12, 5);
        let ar = CycRat::from(&a);
        let inv = ar.inv().unwrap();
        assert_eq!(ar.mul(&inv).to_rational(), Some(BigRational::one()));
    }

    #[test]
    fn embedding_matches_f64() {
        let a = &CycInt::from_int(5, 2) + &CycInt::zeta_pow(5, 3).scale(-7);
        let z = a.to_complex(128);
        let (re, im) = a.to_c64();
        assert!((z.re.to_f64() - re).abs() < 1e-12 && (z.im.to_f64() - im).abs() < 1e-12);
    }

    #[test]
    fn descend_inverts_lift() {
        let x = &CycInt::from_int(6, 4) + &CycInt::zeta_pow(6, 1).scale(-3);
        for k in [2u32, 4, 8] {
            assert_eq!(x.lift(k).descend(6), Some(x.clone()));
        }
        assert_eq!(CycInt::zeta_pow(12, 1).descend(6), None);
    }

    #[test]
    fn galois_and_lift() {
        let z = CycInt::zeta_pow(6, 1);
        assert_eq!(z.conj(), CycInt::zeta_pow(6, 5));
        assert_eq!(z.lift(2), CycInt::zeta_pow(12, 2));
    }
}
