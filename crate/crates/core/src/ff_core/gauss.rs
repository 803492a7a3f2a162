use crate::numeric::{pi, Complex, Real};

use super::{CharIndex, FfError, FiniteFieldTable};

/// Gauss sums `g(A) = sum_{x != 0} A(x) exp(2 pi i Tr(x) / p)` over one field at a
/// fixed working precision, sharing the root-of-unity tables between characters.
pub struct GaussSums<'a> {
    field: &'a FiniteFieldTable,
    prec: u32,
    units: Vec<Complex>,
    additive: Vec<Complex>,
}

/// A Gauss sum with an a priori bound on its absolute rounding error.
#[derive(Clone, Debug)]
pub struct GaussValue {
    pub value: Complex,
    pub error_bound: Real,
}

fn roots(n: u32, prec: u32) -> Vec<Complex> {
    let two_pi = pi(prec + 8).ldexp(1);
    (0..n)
        .map(|j| {
            let t = (&two_pi * &Real::from_i64(j as i64, prec + 8)).div_i64(n as i64);
            Complex::cis(&t).with_prec(prec)
        })
        .collect()
}

impl<'a> GaussSums<'a> {
    pub fn new(field: &'a FiniteFieldTable, precision_bits: u32) -> Result<Self, FfError> {
        if precision_bits < 64 {
            return Err(FfError::PrecisionTooLow(precision_bits));
        }
        let prec = precision_bits + 16;
        Ok(GaussSums {
            field,
            prec,
            units: roots(field.q() - 1, prec),
            additive: roots(field.p(), prec),
        })
    }

    pub fn precision(&self) -> u32 {
        self.prec - 16
    }

    pub fn gauss(&self, a: CharIndex) -> GaussValue {
        let n = self.field.q() as u64 - 1;
        let mut acc = Complex::zero(self.prec);
        for x in 1..self.field.q() {
            let l = self.field.dlog(x).unwrap() as u64;
            let chi = &self.units[((a.0 % n) * l % n) as usize];
            let psi = &self.additive[self.field.trace(x) as usize];
            acc = &acc + &(chi * psi);
        }
        let bound = Real::from_i64(self.field.q() as i64, 64).ldexp(-(self.precision() as i64) + 8);
        GaussValue { value: acc.with_prec(self.precision()), error_bound: bound }
    }

    /// All `g(omega^k)` for `k in [0, q-1)`.
    pub fn all(&self) -> Vec<GaussValue> {
        (0..self.field.q() as u64 - 1).map(|k| self.gauss(CharIndex(k))).collect()
    }
}

/// Single Gauss sum; see [`GaussSums`] for batches.
pub fn gauss_sum(field: &FiniteFieldTable, a: CharIndex, precision_bits: u32) -> Result<GaussValue, FfError> {
    Ok(GaussSums::new(field, precision_bits)?.gauss(a))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_and_quadratic() {
        let f = FiniteFieldTable::build(5, 1).unwrap();
        let g0 = gauss_sum(&f, CharIndex::trivial(), 128).unwrap();
        assert!((&g0.value.re + &Real::one(128)).abs().magnitude() < -110);
        assert!(g0.value.im.abs().magnitude() < -110);
        let g = gauss_sum(&f, CharIndex::quadratic(&f), 128).unwrap();
        let sqrt5 = Real::from_i64(5, 128).sqrt();
        assert!((&g.value.re - &sqrt5).abs().magnitude() < -110);
        assert!(g.value.im.abs().magnitude() < -110);
    }

    #[test]
    fn low_precision_rejected() {
        let f = FiniteFieldTable::build(5, 1).unwrap();
        assert!(matches!(gauss_sum(&f, CharIndex(1), 32), Err(FfError::PrecisionTooLow(32))));
    }
}
