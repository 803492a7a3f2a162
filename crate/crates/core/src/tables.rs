//! Trace tables of the Whipple families: the character-sum side against sums of
//! newform coefficients, with the row targets read from `data/tables.toml`.

use std::str::FromStr;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Deserialize;

use crate::char_sums::{frobenius_trace, h_exact, kronecker, p_normalized, self_dual_sign, CharSumError};
use crate::ff_core::FiniteFieldTable;
use crate::hg_datum::{parse_rational, whipple_family, HGDatum, Rational, WhippleFamily};
use crate::modular_forms::{CoefficientProvider, ModularError};
use crate::report::{ReportItem, Status, VerificationReport};

const TABLE_DATA: &str = include_str!("../data/tables.toml");

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TableError {
    #[error("table data: {0}")]
    Data(String),
    #[error(transparent)]
    CharSum(#[from] CharSumError),
    #[error(transparent)]
    Modular(#[from] ModularError),
    #[error("unknown table '{0}'")]
    UnknownTable(String),
    #[error("no row for pair {0}")]
    UnknownPair(String),
    #[error("value at p = {0} is not an integer")]
    NotIntegral(u32),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Which {
    Hd1,
    Hd2,
    Hd3,
}

impl FromStr for Which {
    type Err = TableError;
    fn from_str(s: &str) -> Result<Self, TableError> {
        match s.to_ascii_lowercase().as_str() {
            "hd1" => Ok(Which::Hd1),
            "hd2" => Ok(Which::Hd2),
            "hd3" => Ok(Which::Hd3),
            _ => Err(TableError::UnknownTable(s.to_string())),
        }
    }
}

impl Which {
    pub fn id(&self) -> &'static str {
        match self {
            Which::Hd1 => "hd1",
            Which::Hd2 => "hd2",
            Which::Hd3 => "hd3",
        }
    }
}

/// `kronecker(chi, p) p^p_power a_p(form)`; the coefficient is `1` without a form.
#[derive(Clone, Debug, PartialEq, Eq, Deserialize)]
pub struct Term {
    pub form: Option<String>,
    #[serde(default = "one")]
    pub chi: i64,
    #[serde(default)]
    pub p_power: u32,
}

fn one() -> i64 {
    1
}

#[derive(Clone, Debug, Deserialize)]
struct RawRow {
    pair: String,
    terms: Vec<Term>,
    #[serde(default)]
    alt: Vec<Vec<Term>>,
    residue: Option<u32>,
}

#[derive(Clone, Debug, Deserialize)]
struct RawTables {
    version: u32,
    hd1: Vec<RawRow>,
    hd2: Vec<RawRow>,
    hd3: Vec<RawRow>,
}

#[derive(Clone, Debug)]
pub struct TableRow {
    pub which: Which,
    pub family: WhippleFamily,
    pub terms: Vec<Term>,
    pub alt: Vec<Vec<Term>>,
    /// primes restricted to `p = 1 mod residue`
    pub residue: Option<u32>,
}

pub fn data_version() -> Result<u32, TableError> {
    Ok(raw()?.version)
}

fn raw() -> Result<RawTables, TableError> {
    toml::from_str(TABLE_DATA).map_err(|e| TableError::Data(e.to_string()))
}

fn pair_of(s: &str) -> Result<(Rational, Rational), TableError> {
    let (c, f) = s.split_once(',').ok_or_else(|| TableError::Data(format!("bad pair '{s}'")))?;
    let p = |x: &str| parse_rational(x.trim()).map_err(|e| TableError::Data(e.to_string()));
    Ok((p(c)?, p(f)?))
}

pub fn rows(which: Which) -> Result<Vec<TableRow>, TableError> {
    let t = raw()?;
    let list = match which {
        Which::Hd1 => t.hd1,
        Which::Hd2 => t.hd2,
        Which::Hd3 => t.hd3,
    };
    list.into_iter()
        .map(|r| {
            let (c, f) = pair_of(&r.pair)?;
            let family = whipple_family(c, f).map_err(|e| TableError::Data(e.to_string()))?;
            Ok(TableRow { which, family, terms: r.terms, alt: r.alt, residue: r.residue })
        })
        .collect()
}

impl TableRow {
    pub fn datum(&self) -> &HGDatum {
        match self.which {
            Which::Hd1 => &self.family.hd1,
            Which::Hd2 => &self.family.hd2,
            Which::Hd3 => &self.family.hd3,
        }
    }

    pub fn pair(&self) -> String {
        format!("{},{}", self.family.c, self.family.f)
    }

    /// Primes where the row is stated: `p >= 7`, prime to the lcd and in the residue class.
    pub fn applies(&self, p: u32) -> bool {
        p >= 7 && is_prime(p) && self.datum().lcd() % p != 0 && self.residue.is_none_or(|r| p % r == 1)
    }

    /// Character-sum side of the row at `p`.
    pub fn lhs(&self, p: u32) -> Result<BigInt, TableError> {
        let d = self.datum();
        match self.which {
            Which::Hd3 if (p - 1) % d.lcd() == 0 => {
                let field = FiniteFieldTable::build(p, 1).map_err(CharSumError::from)?;
                p_normalized(d, 1, &field)?.to_rational_integer().map(BigInt::from).ok_or(TableError::NotIntegral(p))
            }
            Which::Hd3 => Ok(frobenius_trace(d, p)? * self_dual_sign(d, p as u64)?),
            _ if d.is_defined_over_q_as_multisets() => Ok(frobenius_trace(d, p)?),
            _ => {
                let field = FiniteFieldTable::build(p, 1).map_err(CharSumError::from)?;
                let h = h_exact(d, Rational::from_integer(1), &field)?.to_rational().ok_or(CharSumError::NotRational)?;
                let e = ((d.n() - d.integral_beta_count()) / 2) as u32;
                let v = h * BigRational::from_integer(BigInt::from(p).pow(e)) * BigRational::from_integer(self_dual_sign(d, p as u64)?.into());
                if v.is_integer() {
                    Ok(v.to_integer())
                } else {
                    Err(TableError::NotIntegral(p))
                }
            }
        }
    }
}

fn is_prime(n: u32) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

/// Value of a term list at `p`.
pub fn evaluate(terms: &[Term], p: u32, provider: &CoefficientProvider) -> Result<BigInt, TableError> {
    let mut acc = BigInt::from(0);
    for t in terms {
        let a = match &t.form {
            Some(name) => BigInt::from(provider.ap(name, p as u64)?),
            None => BigInt::from(1),
        };
        acc += a * kronecker(t.chi, p as u64) * BigInt::from(p).pow(t.p_power);
    }
    Ok(acc)
}

pub fn format_terms(terms: &[Term]) -> String {
    terms
        .iter()
        .map(|t| {
            let mut s = String::new();
            if t.chi != 1 {
                s.push_str(&format!("({}/p)", t.chi));
            }
            if t.p_power > 0 {
                s.push_str(&if t.p_power == 1 { "p".to_string() } else { format!("p^{}", t.p_power) });
            }
            if let Some(f) = &t.form {
                s.push_str(&format!("a_p({f})"));
            }
            if s.is_empty() {
                s.push('1');
            }
            s
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

/// Checks every row (or the one matching `pair`) at the primes in `[pmin, pmax]`.
pub fn verify_table(
    which: Which,
    pair: Option<&str>,
    pmin: u32,
    pmax: u32,
    provider: &CoefficientProvider,
) -> Result<VerificationReport, TableError> {
    let mut rows = rows(which)?;
    if let Some(sel) = pair {
        let (c, f) = pair_of(sel)?;
        rows.retain(|r| r.family.c == c && r.family.f == f);
        if rows.is_empty() {
            return Err(TableError::UnknownPair(sel.to_string()));
        }
    }
    let mut rep = VerificationReport::new(format!("tables:{}", which.id()));
    for row in &rows {
        for p in (pmin..=pmax).filter(|&p| row.applies(p)) {
            rep.push(check_row(row, p, provider)?);
        }
    }
    Ok(rep)
}

pub fn check_row(row: &TableRow, p: u32, provider: &CoefficientProvider) -> Result<ReportItem, TableError> {
    let t0 = Instant::now();
    let lhs = row.lhs(p)?;
    let rhs = evaluate(&row.terms, p, provider)?;
    let mut ok = lhs == rhs;
    let mut alts = Vec::new();
    for a in &row.alt {
        let v = evaluate(a, p, provider)?;
        ok &= v == rhs;
        alts.push(v.to_string());
    }
    let mut rhs_s = format!("{rhs} = {}", format_terms(&row.terms));
    if !alts.is_empty() {
        rhs_s.push_str(&format!(" (alternatives {})", alts.join(", ")));
    }
    Ok(ReportItem {
        case: format!("{}({})", row.which.id().to_uppercase(), row.pair()),
        parameters: format!("p={p}"),
        status: if ok { Status::Pass } else { Status::Fail },
        theorem: true,
        lhs: lhs.to_string(),
        rhs: rhs_s,
        discrepancy: None,
        runtime_ms: t0.elapsed().as_millis() as u64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn data_file_parses() {
        assert_eq!(data_version().unwrap(), 1);
        for w in [Which::Hd1, Which::Hd2, Which::Hd3] {
            let r = rows(w).unwrap();
            assert_eq!(r.len(), 7);
            assert!(r.iter().all(|row| row.family.in_table));
        }
    }

    #[test]
    fn ahlgren_row_small_primes() {
        let prov = CoefficientProvider::offline();
        let rep = verify_table(Which::Hd3, Some("1/2,1/2"), 7, 30, &prov).unwrap();
        assert_eq!(rep.items.len(), 7);
        assert!(rep.all_pass(), "{}", rep.to_table());
    }

    #[test]
    fn residue_rows_skip_other_primes() {
        let r = rows(Which::Hd2).unwrap();
        let last = r.last().unwrap();
        assert!(!last.applies(11) && last.applies(41));
        assert!(!r[0].applies(9) && !r[0].applies(5));
        assert!(matches!(verify_table(Which::Hd2, Some("1/7,1/7"), 7, 10, &CoefficientProvider::offline()), Err(TableError::UnknownPair(_))));
    }

    #[test]
    fn term_formatting() {
        let t = vec![Term { form: Some("8.4.a.a".into()), chi: 1, p_power: 1 }, Term { form: None, chi: -1, p_power: 2 }];
        assert_eq!(format_terms(&t), "pa_p(8.4.a.a) + (-1/p)p^2");
    }
}
