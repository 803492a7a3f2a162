use num_rational::Ratio;

use super::{CycInt, FfError, FiniteFieldTable, GroupRing};

/// The multiplicative character `omega^k`, where `omega(g) = zeta_(q-1)` for the
/// generator `g` of the field table. Every character, including the trivial
/// one, is extended by `A(0) = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CharIndex(pub u64);

impl CharIndex {
    pub fn trivial() -> Self {
        CharIndex(0)
    }

    pub fn new(k: i64, field: &FiniteFieldTable) -> Self {
        CharIndex(k.rem_euclid(field.q() as i64 - 1) as u64)
    }

    /// `omega^(u (q-1) a)` for a rational `a` with `(q-1) a` integral.
    pub fn from_fraction(a: Ratio<i64>, u: i64, field: &FiniteFieldTable) -> Result<Self, FfError> {
        let n = field.q() as i64 - 1;
        let t = a * n;
        if !t.is_integer() {
            return Err(FfError::OrderMismatch);
        }
        Ok(CharIndex::new(u * t.to_integer(), field))
    }

    pub fn quadratic(field: &FiniteFieldTable) -> Self {
        CharIndex((field.q() as u64 - 1) / 2)
    }

    pub fn is_trivial(&self) -> bool {
        self.0 == 0
    }

    pub fn mul(self, o: CharIndex, field: &FiniteFieldTable) -> Self {
        CharIndex((self.0 + o.0) % (field.q() as u64 - 1))
    }

    pub fn inv(self, field: &FiniteFieldTable) -> Self {
        let n = field.q() as u64 - 1;
        CharIndex((n - self.0 % n) % n)
    }

    pub fn pow(self, e: i64, field: &FiniteFieldTable) -> Self {
        let n = field.q() as i64 - 1;
        CharIndex(((self.0 as i64 % n) * e.rem_euclid(n)).rem_euclid(n) as u64)
    }

    pub fn order(&self, field: &FiniteFieldTable) -> u64 {
        let n = field.q() as u64 - 1;
        n / num_integer::gcd(n, self.0 % n)
    }

    /// Exponent `e` with `A(x) = zeta_M^e`, or `None` when `x = 0`.
    pub fn exponent(&self, field: &FiniteFieldTable, x: u32, m: u32) -> Option<i64> {
        let n = field.q() as u64 - 1;
        debug_assert!((self.0 * m as u64) % n == 0);
        let t = self.0 * m as u64 / n;
        field.dlog(x).map(|l| ((t * l as u64) % m as u64) as i64)
    }

    /// `A(-1)` as a sign.
    pub fn sign_at_minus_one(&self, _field: &FiniteFieldTable) -> i128 {
        // omega(-1) = zeta_(q-1)^((q-1)/2) = -1
        if self.0 % 2 == 0 {
            1
        } else {
            -1
        }
    }
}

pub(crate) fn check_order(field: &FiniteFieldTable, a: CharIndex, m: u32) -> Result<(), FfError> {
    let n = field.q() as u64 - 1;
    if (a.0 * m as u64) % n != 0 {
        return Err(FfError::OrderMismatch);
    }
    Ok(())
}

/// `A(x)` as an element of `Z[zeta_M]`; zero at `x = 0`.
pub fn char_eval(field: &FiniteFieldTable, a: CharIndex, x: u32, m: u32) -> Result<CycInt, FfError> {
    check_order(field, a, m)?;
    Ok(match a.exponent(field, x, m) {
        None => CycInt::zero(m),
        Some(e) => CycInt::zeta_pow(m, e),
    })
}

/// `J(A, B) = sum_x A(x) B(1 - x)`.
pub fn jacobi_sum(field: &FiniteFieldTable, a: CharIndex, b: CharIndex, m: u32) -> Result<CycInt, FfError> {
    check_order(field, a, m)?;
    check_order(field, b, m)?;
    let mut acc = GroupRing::new(m);
    // x = 0 and x = 1 contribute nothing since A(0) = B(0) = 0
    for x in 2..field.q() {
        let y = field.one_minus(x);
        if y == 0 {
            continue;
        }
        acc.add_at(a.exponent(field, x, m).unwrap() + b.exponent(field, y, m).unwrap(), 1);
    }
    Ok(acc.to_cyc())
}

/// Finite field binomial coefficient `(A over B) = -B(-1) J(A, B-bar)`.
pub fn binomial_ff(field: &FiniteFieldTable, a: CharIndex, b: CharIndex, m: u32) -> Result<CycInt, FfError> {
    let j = jacobi_sum(field, a, b.inv(field), m)?;
    Ok(j.scale(-b.sign_at_minus_one(field)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_character_f5() {
        let f = FiniteFieldTable::build(5, 1).unwrap();
        let phi = CharIndex::quadratic(&f);
        assert_eq!(char_eval(&f, phi, 2, 2).unwrap(), CycInt::from_int(2, -1));
        assert_eq!(char_eval(&f, phi, 4, 2).unwrap(), CycInt::from_int(2, 1));
        assert!(char_eval(&f, phi, 0, 2).unwrap().is_zero());
        assert_eq!(char_eval(&f, CharIndex::trivial(), 3, 2).unwrap(), CycInt::one(2));
    }

    #[test]
    fn jacobi_examples() {
        let f7 = FiniteFieldTable::build(7, 1).unwrap();
        let e = CharIndex::trivial();
        assert_eq!(jacobi_sum(&f7, e, e, 2).unwrap().to_rational_integer(), Some(5));
        let phi7 = CharIndex::quadratic(&f7);
        assert_eq!(jacobi_sum(&f7, e, phi7, 2).unwrap().to_rational_integer(), Some(-1));
        let f5 = FiniteFieldTable::build(5, 1).unwrap();
        let phi5 = CharIndex::quadratic(&f5);
        assert_eq!(jacobi_sum(&f5, phi5, phi5, 2).unwrap().to_rational_integer(), Some(-1));
    }

    #[test]
    fn binomial_examples() {
        let f7 = FiniteFieldTable::build(7, 1).unwrap();
        let e = CharIndex::trivial();
        assert_eq!(binomial_ff(&f7, e, e, 2).unwrap().to_rational_integer(), Some(-5));
        let a = CharIndex::new(2, &f7);
        assert_eq!(binomial_ff(&f7, a, e, 3).unwrap().to_rational_integer(), Some(1));
        let f5 = FiniteFieldTable::build(5, 1).unwrap();
        let phi5 = CharIndex::quadratic(&f5);
        assert_eq!(binomial_ff(&f5, phi5, phi5, 2).unwrap().to_rational_integer(), Some(1));
    }

    #[test]
    fn order_mismatch() {
        let f7 = FiniteFieldTable::build(7, 1).unwrap();
        assert_eq!(char_eval(&f7, CharIndex(1), 3, 2), Err(FfError::OrderMismatch));
    }
}
