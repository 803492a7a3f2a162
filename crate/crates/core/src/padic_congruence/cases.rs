use std::time::Instant;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use super::{modulus, padic_gamma, truncated_mod, PadicError, GAMMA_COST_LIMIT};
use crate::classical_series::SeriesSpec;
use crate::hg_datum::Rational;
use crate::modular_forms::CoefficientProvider;
use crate::report::{ReportItem, Status};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Target {
    /// `a_p(f)`, times `p` when the flag is set
    Newform { name: &'static str, times_p: bool },
    /// `-Gamma_p(1/4)^4` for `p = 1 mod 4`, `-(p^2/16) Gamma_p(1/4)^4` for `p = 3 mod 4`
    GammaQuarter,
}

#[derive(Clone, Copy, Debug)]
pub struct CongruenceCase {
    pub id: &'static str,
    pub upper: &'static [(i64, i64)],
    /// lower parameters without the `1` that becomes `k!`
    pub lower: &'static [(i64, i64)],
    pub prefactor: u32,
    pub target: Target,
    /// exponent of the stated modulus
    pub k: u32,
    /// primes `p >= min_prime` are in range
    pub min_prime: u64,
    /// the congruence is proved up to this exponent
    pub proved_k: u32,
}

const H: (i64, i64) = (1, 2);
const ONE: (i64, i64) = (1, 1);
const T1: (i64, i64) = (1, 3);
const T2: (i64, i64) = (2, 3);

pub const CASES: &[CongruenceCase] = &[
    CongruenceCase {
        id: "ahlgren",
        upper: &[H, H, H],
        lower: &[ONE, ONE],
        prefactor: 0,
        target: Target::Newform { name: "eta(4t)^6", times_p: false },
        k: 2,
        min_prime: 5,
        proved_k: 2,
    },
    CongruenceCase {
        id: "long_ramakrishna",
        upper: &[H, H, H],
        lower: &[ONE, ONE],
        prefactor: 0,
        target: Target::GammaQuarter,
        k: 3,
        min_prime: 5,
        proved_k: 3,
    },
    CongruenceCase {
        id: "s14_1",
        upper: &[H, H, H, H, H, H],
        lower: &[ONE, ONE, ONE, ONE, ONE],
        prefactor: 0,
        target: Target::Newform { name: "8.6.a.a", times_p: false },
        k: 5,
        min_prime: 7,
        proved_k: 3,
    },
    CongruenceCase {
        id: "s14_2",
        upper: &[H, H, H, H, T1, T2],
        lower: &[(5, 6), (7, 6), ONE, ONE, ONE],
        prefactor: 1,
        target: Target::Newform { name: "4.6.a.a", times_p: false },
        k: 5,
        min_prime: 7,
        proved_k: 0,
    },
    CongruenceCase {
        id: "s14_3",
        upper: &[H, T1, T2, H, T1, T2],
        lower: &[(5, 6), (7, 6), ONE, (5, 6), (7, 6)],
        prefactor: 2,
        target: Target::Newform { name: "6.6.a.a", times_p: false },
        k: 4,
        min_prime: 7,
        proved_k: 0,
    },
    CongruenceCase {
        id: "e7f61",
        upper: &[H, (5, 4), H, H, H, H, H],
        lower: &[(1, 4), ONE, ONE, ONE, ONE, ONE],
        prefactor: 0,
        target: Target::Newform { name: "8.4.a.a", times_p: true },
        k: 4,
        min_prime: 5,
        proved_k: 0,
    },
    CongruenceCase {
        id: "s46_1",
        upper: &[H, (5, 4), H, H, H, T1, T2],
        lower: &[(1, 4), (7, 6), (5, 6), ONE, ONE, ONE],
        prefactor: 0,
        target: Target::Newform { name: "12.4.a.a", times_p: false },
        k: 3,
        min_prime: 13,
        proved_k: 0,
    },
    CongruenceCase {
        id: "s46_2",
        upper: &[H, (5, 4), H, H, H, (1, 6), (5, 6)],
        lower: &[(1, 4), (4, 3), T2, ONE, ONE, ONE],
        prefactor: 0,
        target: Target::Newform { name: "24.4.a.a", times_p: false },
        k: 3,
        min_prime: 13,
        proved_k: 0,
    },
    CongruenceCase {
        id: "s46_3",
        upper: &[H, T1, T2, H, T1, T2],
        lower: &[(5, 6), (7, 6), ONE, (5, 6), (7, 6)],
        prefactor: 2,
        target: Target::Newform { name: "6.6.a.a", times_p: false },
        k: 4,
        min_prime: 13,
        proved_k: 0,
    },
    CongruenceCase {
        id: "s46_4",
        upper: &[H, (5, 4), T1, T2, H, T1, T2],
        lower: &[(1, 4), (5, 6), (7, 6), ONE, (5, 6), (7, 6)],
        prefactor: 1,
        target: Target::Newform { name: "18.4.a.a", times_p: false },
        k: 3,
        min_prime: 13,
        proved_k: 0,
    },
    CongruenceCase {
        id: "s46_5",
        upper: &[H, (1, 5), (2, 5), H, (3, 5), (4, 5)],
        lower: &[(11, 10), (9, 10), ONE, (13, 10), (7, 10)],
        prefactor: 1,
        target: Target::Newform { name: "10.4.a.a", times_p: false },
        k: 3,
        min_prime: 13,
        proved_k: 0,
    },
    CongruenceCase {
        id: "s46_6",
        upper: &[H, (5, 4), (1, 5), (2, 5), H, (3, 5), (4, 5)],
        lower: &[(1, 4), (11, 10), (9, 10), ONE, (13, 10), (7, 10)],
        prefactor: 1,
        target: Target::Newform { name: "50.4.a.d", times_p: false },
        k: 3,
        min_prime: 13,
        proved_k: 0,
    },
];

impl CongruenceCase {
    pub fn find(id: &str) -> Result<&'static CongruenceCase, PadicError> {
        CASES.iter().find(|c| c.id == id).ok_or_else(|| PadicError::UnknownCase(id.to_string()))
    }

    pub fn spec(&self) -> SeriesSpec {
        let r = |v: &[(i64, i64)]| v.iter().map(|&(n, d)| Rational::new(n, d)).collect::<Vec<_>>();
        SeriesSpec::new(&r(self.upper), &r(self.lower))
    }

    /// Whether agreement modulo `p^k` is a proved statement.
    pub fn is_theorem(&self, k: u32) -> bool {
        k <= self.proved_k
    }

    /// Right-hand side modulo `p^k`.
    pub fn target_mod(&self, p: u64, k: u32, provider: &CoefficientProvider) -> Result<BigInt, PadicError> {
        let m = modulus(p, k);
        let v = match self.target {
            Target::Newform { name, times_p } => {
                let a = BigInt::from(provider.ap(name, p)?);
                if times_p {
                    a * p
                } else {
                    a
                }
            }
            Target::GammaQuarter => {
                let g = padic_gamma(Rational::new(1, 4), p, k)?.pow(4u32);
                if p % 4 == 1 {
                    -g
                } else {
                    let inv16 = super::inverse_mod(&BigInt::from(16), &m).expect("p is odd");
                    -(g * p * p * inv16)
                }
            }
        };
        Ok(v.mod_floor(&m))
    }

    /// Largest exponent the depth probe can afford for this prime.
    fn probe_k(&self, p: u64) -> u32 {
        let want = self.k + 2;
        match self.target {
            Target::Newform { .. } => want,
            Target::GammaQuarter => {
                let mut k = self.k;
                while k < want && p.checked_pow(k + 1).is_some_and(|v| v <= GAMMA_COST_LIMIT) {
                    k += 1;
                }
                k
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CongruenceOutcome {
    pub case: &'static str,
    pub p: u64,
    pub k: u32,
    pub lhs: BigInt,
    pub rhs: BigInt,
    pub holds: bool,
    /// largest `j <= probe_k` with agreement modulo `p^j`
    pub max_k: u32,
    pub probe_k: u32,
    pub theorem: bool,
    pub status: Status,
    pub runtime_ms: u64,
}

impl CongruenceOutcome {
    pub fn to_item(&self) -> ReportItem {
        let at = if self.max_k == self.probe_k { format!(">={}", self.max_k) } else { self.max_k.to_string() };
        ReportItem {
            case: format!("supercongruence:{}", self.case),
            parameters: format!("p={} k={} max_k={}", self.p, self.k, at),
            status: self.status,
            theorem: self.theorem,
            lhs: self.lhs.to_string(),
            rhs: self.rhs.to_string(),
            discrepancy: None,
            runtime_ms: self.runtime_ms,
        }
    }
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

/// Truncation at `p - 1` against the case's target modulo `p^k` (the case's own exponent when `k` is `None`).
pub fn supercongruence_check(
    case_id: &str,
    p: u64,
    k: Option<u32>,
    provider: &CoefficientProvider,
) -> Result<CongruenceOutcome, PadicError> {
    let started = Instant::now();
    let case = CongruenceCase::find(case_id)?;
    if !is_prime(p) || p < case.min_prime {
        return Err(PadicError::PrimeOutOfRange { case: case.id.to_string(), p });
    }
    let k = k.unwrap_or(case.k);
    let probe = case.probe_k(p).max(k);
    let spec = case.spec();
    let lhs_deep = truncated_mod(&spec, (p - 1) as usize, p, probe, case.prefactor)?;
    let rhs_deep = case.target_mod(p, probe, provider)?;
    let mut diff = (&lhs_deep - &rhs_deep).mod_floor(&modulus(p, probe));
    let mut max_k = 0;
    while max_k < probe && (&diff % p).is_zero() {
        diff /= p;
        max_k += 1;
    }
    let m = modulus(p, k);
    let holds = max_k >= k;
    let theorem = case.is_theorem(k);
    let status = match (holds, theorem) {
        (true, true) => Status::Pass,
        (true, false) => Status::ConjecturalVerified,
        (false, _) => Status::Fail,
    };
    Ok(CongruenceOutcome {
        case: case.id,
        p,
        k,
        lhs: lhs_deep.mod_floor(&m),
        rhs: rhs_deep.mod_floor(&m),
        holds,
        max_k,
        probe_k: probe,
        theorem,
        status,
        runtime_ms: started.elapsed().as_millis() as u64,
    })
}
