//! Finite fields with discrete logarithm tables, multiplicative characters,
//! exact cyclotomic integers, and Gauss and Jacobi sums.

mod characters;
mod cyclotomic;
mod field;
mod gauss;

pub use characters::{binomial_ff, char_eval, jacobi_sum, CharIndex};
pub use cyclotomic::{cyclotomic_poly as cyclotomic_polynomial, euler_phi, CycInt, CycRat, GroupRing};
pub use field::{FiniteFieldTable, MAX_ORDER};
pub use gauss::{gauss_sum, GaussSums, GaussValue};


#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FfError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("characteristic 2 is not supported")]
    EvenCharacteristic,
    #[error("field {p}^{s} exceeds the supported order 2^20")]
    FieldTooLarge { p: u32, s: u32 },
    #[error("no primitive polynomial of degree {s} found over F_{p}")]
    NoPrimitivePolynomialFound { p: u32, s: u32 },
    #[error("character order does not divide the target root of unity order")]
    OrderMismatch,
    #[error("precision {0} bits is below the 64-bit minimum")]
    PrecisionTooLow(u32),
}

/// Inverse of `a` modulo `n`, if it exists.
pub fn mod_inverse(a: i64, n: i64) -> Option<i64> {
    let (mut r0, mut r1) = (n, a.rem_euclid(n));
    let (mut s0, mut s1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    if r0 == 1 {
        Some(s0.rem_euclid(n))
    } else {
        None
    }
}
