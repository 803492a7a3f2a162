use super::FfError;

/// Largest field order accepted by [`FiniteFieldTable::build`].
pub const MAX_ORDER: u64 = 1 << 20;

/// A finite field `F_q`, `q = p^s`, with a fixed generator and a full
/// discrete logarithm table.
///
/// Elements are encoded as integers in `[0, q)`: the base-`p` digits are the
/// coordinates over the power basis `1, X, ..., X^(s-1)` modulo the defining
/// polynomial. For `s = 1` this is the usual residue.
#[derive(Clone, Debug)]
pub struct FiniteFieldTable {
    p: u32,
    s: u32,
    q: u32,
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
    trace: Vec<u32>,
    one_minus: Vec<u32>,
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

fn digits(mut x: u32, p: u32, s: u32) -> Vec<u32> {
    let mut d = Vec::with_capacity(s as usize);
    for _ in 0..s {
        d.push(x % p);
        x /= p;
    }
    d
}

fn encode(d: &[u32], p: u32) -> u32 {
    d.iter().rev().fold(0, |acc, &c| acc * p + c)
}

impl FiniteFieldTable {
    /// Builds `F_{p^s}`.
    ///
    /// For `s = 1` the generator is the smallest primitive root. For `s > 1` the
    /// defining polynomial is the first monic polynomial `X^s + c_(s-1) X^(s-1) + ... + c_0`,
    /// ordered by the integer with base-`p` digits `c_0, ..., c_(s-1)`, whose root
    /// `X` has multiplicative order `q - 1`; that root is the generator.
    pub fn build(p: u32, s: u32) -> Result<Self, FfError> {
        if !is_prime(p as u64) {
            return Err(FfError::NotPrime(p as u64));
        }
        if p == 2 {
            return Err(FfError::EvenCharacteristic);
        }
        if s == 0 {
            return Err(FfError::FieldTooLarge { p, s });
        }
        let q64 = (p as u64).checked_pow(s).unwrap_or(u64::MAX);
        if q64 > MAX_ORDER {
            return Err(FfError::FieldTooLarge { p, s });
        }
        let q = q64 as u32;
        let (modulus, exp) = if s == 1 {
            let factors = prime_factors(q64 - 1);
            let g = (1..q64)
                .find(|&g| factors.iter().all(|&l| pow_mod(g, (q64 - 1) / l, q64) != 1))
                .ok_or(FfError::NoPrimitivePolynomialFound { p, s })?;
            let mut exp = Vec::with_capacity(q as usize - 1);
            let mut x = 1u64;
            for _ in 0..q - 1 {
                exp.push(x as u32);
                x = x * g % q64;
            }
            (Vec::new(), exp)
        } else {
            Self::search_primitive(p, s, q)?
        };
        let mut log = vec![u32::MAX; q as usize];
        for (j, &x) in exp.iter().enumerate() {
            if log[x as usize] != u32::MAX {
                return Err(FfError::NoPrimitivePolynomialFound { p, s });
            }
            log[x as usize] = j as u32;
        }
        let mut f = FiniteFieldTable { p, s, q, modulus, exp, log, trace: Vec::new(), one_minus: Vec::new() };
        f.one_minus = (0..q).map(|x| f.sub(1, x)).collect();
        f.trace = (0..q).map(|x| f.compute_trace(x)).collect();
        Ok(f)
    }

    fn search_primitive(p: u32, s: u32, q: u32) -> Result<(Vec<u32>, Vec<u32>), FfError> {
        for v in 0..q {
            let c = digits(v, p, s);
            if c[0] == 0 {
                continue;
            }
            let mut cur = vec![0u32; s as usize];
            cur[0] = 1;
            let mut exp = Vec::with_capacity(q as usize - 1);
            let mut ok = true;
            for j in 0..q - 1 {
                if j > 0 && cur[0] == 1 && cur[1..].iter().all(|&d| d == 0) {
                    ok = false;
                    break;
                }
                exp.push(encode(&cur, p));
                // multiply by X modulo X^s + sum c_i X^i
                let top = cur[s as usize - 1];
                for i in (1..s as usize).rev() {
                    cur[i] = (cur[i - 1] + p - (top * c[i]) % p) % p;
                }
                cur[0] = (p - (top * c[0]) % p) % p;
            }
            let back_to_one = cur[0] == 1 && cur[1..].iter().all(|&d| d == 0);
            if ok && back_to_one {
                return Ok((c, exp));
            }
        }
        Err(FfError::NoPrimitivePolynomialFound { p, s })
    }

    /// The same field with generator `g^v`; `v` must be a unit mod `q - 1`.
    pub fn with_generator_power(&self, v: u32) -> Result<Self, FfError> {
        let n = (self.q - 1) as i64;
        let inv = crate::ff_core::mod_inverse(v as i64, n).ok_or(FfError::OrderMismatch)?;
        let mut f = self.clone();
        for j in 0..self.q - 1 {
            f.exp[j as usize] = self.exp[((j as u64 * v as u64) % n as u64) as usize];
        }
        for x in 1..self.q {
            f.log[x as usize] = ((self.log[x as usize] as i64 * inv) % n) as u32;
        }
        Ok(f)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// Coefficients `c_0, ..., c_(s-1)` of the monic defining polynomial (empty for `s = 1`).
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn generator(&self) -> u32 {
        self.exp[1 % self.exp.len()]
    }

    pub fn dlog(&self, x: u32) -> Option<u32> {
        if x == 0 {
            None
        } else {
            Some(self.log[x as usize])
        }
    }

    pub fn gen_pow(&self, j: u64) -> u32 {
        self.exp[(j % (self.q as u64 - 1)) as usize]
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        if self.s == 1 {
            return (a + b) % self.p;
        }
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        let mut scale = 1;
        for _ in 0..self.s {
            out += ((a % self.p + b % self.p) % self.p) * scale;
            a /= self.p;
            b /= self.p;
            scale *= self.p;
        }
        out
    }

    pub fn neg(&self, a: u32) -> u32 {
        if self.s == 1 {
            return (self.p - a) % self.p;
        }
        let mut a = a;
        let mut out = 0;
        let mut scale = 1;
        for _ in 0..self.s {
            out += ((self.p - a % self.p) % self.p) * scale;
            a /= self.p;
            scale *= self.p;
        }
        out
    }

    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    pub fn one_minus(&self, x: u32) -> u32 {
        self.one_minus[x as usize]
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let n = self.q as usize - 1;
        self.exp[(self.log[a as usize] as usize + self.log[b as usize] as usize) % n]
    }

    pub fn inv(&self, a: u32) -> Option<u32> {
        let n = self.q as usize - 1;
        self.dlog(a).map(|l| self.exp[(n - l as usize) % n])
    }

    pub fn div(&self, a: u32, b: u32) -> Option<u32> {
        self.inv(b).map(|bi| self.mul(a, bi))
    }

    pub fn pow(&self, a: u32, e: u64) -> u32 {
        match self.dlog(a) {
            None => {
                if e == 0 {
                    1
                } else {
                    0
                }
            }
            Some(l) => self.gen_pow(l as u64 * e),
        }
    }

    /// Image of an integer under `Z -> F_p -> F_q`.
    pub fn from_int(&self, v: i64) -> u32 {
        v.rem_euclid(self.p as i64) as u32
    }

    /// Image of `n/d`; `None` when `p | d`.
    pub fn from_ratio(&self, n: i64, d: i64) -> Option<u32> {
        self.div(self.from_int(n), self.from_int(d))
    }

    /// Absolute trace to `F_p`, as a residue in `[0, p)`.
    pub fn trace(&self, x: u32) -> u32 {
        self.trace[x as usize]
    }

    fn compute_trace(&self, x: u32) -> u32 {
        let mut acc = 0;
        let mut y = x;
        for _ in 0..self.s {
            acc = self.add(acc, y);
            y = self.pow(y, self.p as u64);
        }
        debug_assert!(acc < self.p, "trace left the prime field");
        acc
    }

    pub fn elements(&self) -> std::ops::Range<u32> {
        0..self.q
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_seven() {
        let f = FiniteFieldTable::build(7, 1).unwrap();
        assert_eq!(f.generator(), 3);
        assert_eq!(f.pow(3, 6), 1);
        assert_eq!(f.pow(3, 3), 6);
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(FiniteFieldTable::build(4, 1).unwrap_err(), FfError::NotPrime(4));
        assert!(matches!(FiniteFieldTable::build(3, 13), Err(FfError::FieldTooLarge { .. })));
        assert_eq!(FiniteFieldTable::build(2, 3).unwrap_err(), FfError::EvenCharacteristic);
    }

    #[test]
    fn extension_dlog_bijective() {
        for (p, s) in [(5, 2), (3, 2), (3, 3), (7, 2), (11, 2)] {
            let f = FiniteFieldTable::build(p, s).unwrap();
            let mut seen = vec![false; f.q() as usize - 1];
            for x in 1..f.q() {
                let l = f.dlog(x).unwrap();
                assert_eq!(f.gen_pow(l as u64), x);
                assert!(!seen[l as usize]);
                seen[l as usize] = true;
            }
        }
    }

    #[test]
    fn f25_modulus_and_trace() {
        let f = FiniteFieldTable::build(5, 2).unwrap();
        // first primitive quadratic over F_5 in this ordering: X^2 + X + 2
        assert_eq!(f.modulus(), &[2, 1]);
        // Tr(X) = X + X^5 = -c_1
        assert_eq!(f.trace(5), 4);
        let zeros = (0..25).filter(|&x| f.trace(x) == 0).count();
        assert_eq!(zeros, 5);
    }

    #[test]
    fn field_axioms_small() {
        let f = FiniteFieldTable::build(3, 2).unwrap();
        for a in 0..9 {
            for b in 0..9 {
                for c in 0..9 {
                    assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                }
            }
        }
    }
}
