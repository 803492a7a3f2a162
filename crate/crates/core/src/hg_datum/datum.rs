use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_traits::{One, Zero};

use super::{whipple_family, DatumError, Rational};

/// `x mod 1` in `[0, 1)`.
pub fn frac_part(x: Rational) -> Rational {
    x - x.floor()
}

/// Least common denominator.
pub fn lcd<'a>(xs: impl IntoIterator<Item = &'a Rational>) -> u32 {
    xs.into_iter().fold(1i64, |acc, x| acc.lcm(x.denom())) as u32
}

pub fn parse_rational(s: &str) -> Result<Rational, DatumError> {
    let s = s.trim();
    let bad = || DatumError::Parse(format!("bad rational '{s}'"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: i64 = n.trim().parse().map_err(|_| bad())?;
            let d: i64 = d.trim().parse().map_err(|_| bad())?;
            if d == 0 {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// A hypergeometric datum `{alpha, beta; lambda}` with `b_1` integral.
///
/// Entries are kept verbatim (so `5/4` and `13/10` display as written); the
/// predicates work with entries reduced mod 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HGDatum {
    alpha: Vec<Rational>,
    beta: Vec<Rational>,
    lambda: Rational,
    m: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub struct OrbitPredicates {
    pub is_primitive: bool,
    pub is_self_dual: bool,
    pub is_defined_over_q: bool,
}

impl HGDatum {
    pub fn new(alpha: Vec<Rational>, beta: Vec<Rational>, lambda: Rational) -> Result<Self, DatumError> {
        if alpha.is_empty() || alpha.len() != beta.len() {
            return Err(DatumError::BadLength);
        }
        if !beta[0].is_integer() {
            return Err(DatumError::BadBeta1);
        }
        if lambda.is_zero() {
            return Err(DatumError::ZeroLambda);
        }
        let m = lcd(alpha.iter().chain(beta.iter()));
        Ok(HGDatum { alpha, beta, lambda, m })
    }

    pub fn from_fracs(alpha: &[(i64, i64)], beta: &[(i64, i64)], lambda: Rational) -> Result<Self, DatumError> {
        let conv = |v: &[(i64, i64)]| v.iter().map(|&(n, d)| Rational::new(n, d)).collect();
        Self::new(conv(alpha), conv(beta), lambda)
    }

    pub fn alpha(&self) -> &[Rational] {
        &self.alpha
    }

    pub fn beta(&self) -> &[Rational] {
        &self.beta
    }

    pub fn lambda(&self) -> Rational {
        self.lambda
    }

    pub fn n(&self) -> usize {
        self.alpha.len()
    }

    /// `M = lcd(alpha, beta)`.
    pub fn lcd(&self) -> u32 {
        self.m
    }

    pub fn with_lambda(&self, lambda: Rational) -> Result<Self, DatumError> {
        Self::new(self.alpha.clone(), self.beta.clone(), lambda)
    }

    pub fn alpha_reduced(&self) -> Vec<Rational> {
        self.alpha.iter().map(|&a| frac_part(a)).collect()
    }

    pub fn beta_reduced(&self) -> Vec<Rational> {
        self.beta.iter().map(|&b| frac_part(b)).collect()
    }

    /// Number of integral entries of beta.
    pub fn integral_beta_count(&self) -> usize {
        self.beta.iter().filter(|b| b.is_integer()).count()
    }

    pub fn is_primitive(&self) -> bool {
        self.alpha.iter().all(|a| self.beta.iter().all(|b| !(a - b).is_integer()))
    }

    fn columns_scaled(&self, c: i64) -> Vec<(Rational, Rational)> {
        let mut cols: Vec<_> = self
            .alpha
            .iter()
            .zip(&self.beta)
            .map(|(&a, &b)| (frac_part(a * c), frac_part(b * c)))
            .collect();
        cols.sort();
        cols
    }

    /// The pair is congruent mod Z to `(-alpha, -beta)` as a multiset of columns.
    pub fn is_self_dual(&self) -> bool {
        self.columns_scaled(1) == self.columns_scaled(-1)
    }

    /// The column multiset is stable under `c` for every `c` prime to `M`.
    pub fn is_defined_over_q(&self) -> bool {
        let base = self.columns_scaled(1);
        (1..self.m as i64)
            .filter(|c| c.gcd(&(self.m as i64)) == 1)
            .all(|c| self.columns_scaled(c) == base)
    }

    /// `alpha` and `beta` are separately stable mod Z under every `c` prime to
    /// `M`, i.e. some reordering of beta makes the pair defined over Q. This is
    /// all that the gamma vector and the e-profile depend on.
    pub fn is_defined_over_q_as_multisets(&self) -> bool {
        let scaled = |v: &[Rational], c: i64| {
            let mut w: Vec<Rational> = v.iter().map(|&x| frac_part(x * c)).collect();
            w.sort();
            w
        };
        (1..self.m as i64).filter(|c| c.gcd(&(self.m as i64)) == 1).all(|c| {
            scaled(&self.alpha, c) == scaled(&self.alpha, 1) && scaled(&self.beta, c) == scaled(&self.beta, 1)
        })
    }

    pub fn orbit_predicates(&self) -> OrbitPredicates {
        OrbitPredicates {
            is_primitive: self.is_primitive(),
            is_self_dual: self.is_self_dual(),
            is_defined_over_q: self.is_defined_over_q(),
        }
    }
}

fn fmt_list(v: &[Rational]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

impl fmt::Display for HGDatum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "alpha={} beta={} lambda={}", fmt_list(&self.alpha), fmt_list(&self.beta), self.lambda)
    }
}

fn parse_list(s: &str) -> Result<Vec<Rational>, DatumError> {
    s.split(',').filter(|t| !t.trim().is_empty()).map(parse_rational).collect()
}

/// Accepts `alpha=1/2,1/2 beta=1,1 lambda=1` (lambda defaults to 1) or a
/// preset `HD1(c,f)`, `HD2(c,f)`, `HD3(c,f)`.
impl FromStr for HGDatum {
    type Err = DatumError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        for (tag, idx) in [("HD1(", 1), ("HD2(", 2), ("HD3(", 3)] {
            if let Some(rest) = s.strip_prefix(tag) {
                let inner = rest.strip_suffix(')').ok_or_else(|| DatumError::Parse(s.to_string()))?;
                let (c, f) = inner.split_once(',').ok_or_else(|| DatumError::Parse(s.to_string()))?;
                let fam = whipple_family(parse_rational(c)?, parse_rational(f)?)?;
                return Ok(match idx {
                    1 => fam.hd1,
                    2 => fam.hd2,
                    _ => fam.hd3,
                });
            }
        }
        let (mut alpha, mut beta, mut lambda) = (None, None, Rational::one());
        for tok in s.split_whitespace() {
            let (k, v) = tok.split_once('=').ok_or_else(|| DatumError::Parse(format!("expected key=value, got '{tok}'")))?;
            match k {
                "alpha" => alpha = Some(parse_list(v)?),
                "beta" => beta = Some(parse_list(v)?),
                "lambda" => lambda = parse_rational(v)?,
                _ => return Err(DatumError::Parse(format!("unknown key '{k}'"))),
            }
        }
        match (alpha, beta) {
            (Some(a), Some(b)) => HGDatum::new(a, b, lambda),
            _ => Err(DatumError::Parse("alpha and beta are required".into())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn example_k3_datum() {
        let d = HGDatum::new(vec![r(1, 2); 3], vec![r(1, 1); 3], r(1, 1)).unwrap();
        assert_eq!(d.lcd(), 2);
        assert!(d.is_primitive());
    }

    #[test]
    fn constructor_errors() {
        assert_eq!(HGDatum::new(vec![r(1, 2)], vec![r(1, 1)], r(0, 1)), Err(DatumError::ZeroLambda));
        assert_eq!(HGDatum::new(vec![r(1, 2)], vec![r(1, 2)], r(1, 1)), Err(DatumError::BadBeta1));
        assert_eq!(HGDatum::new(vec![], vec![], r(1, 1)), Err(DatumError::BadLength));
    }

    #[test]
    fn non_primitive() {
        let d = HGDatum::new(vec![r(1, 2), r(1, 3)], vec![r(1, 1), r(4, 3)], r(1, 1)).unwrap();
        assert!(!d.is_primitive());
    }

    #[test]
    fn one_third_not_over_q() {
        let d = HGDatum::new(vec![r(1, 3)], vec![r(1, 1)], r(1, 1)).unwrap();
        assert!(!d.is_defined_over_q());
    }

    #[test]
    fn parse_roundtrip() {
        let d: HGDatum = "alpha=1/2,1/3,2/3 beta=1,5/6,7/6 lambda=-1".parse().unwrap();
        assert_eq!(d.lcd(), 6);
        assert_eq!(d.lambda(), r(-1, 1));
        let back: HGDatum = d.to_string().parse().unwrap();
        assert_eq!(back, d);
        let hd: HGDatum = "HD2(1/3,1/3)".parse().unwrap();
        assert_eq!(hd.to_string(), "alpha=1/2,1/2,1/3,2/3 beta=1,1,7/6,5/6 lambda=1");
        assert!("alpha=1/0 beta=1".parse::<HGDatum>().is_err());
    }
}
