use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::hg_datum::Rational;

use super::lmfdb::LmfdbClient;
use super::qseries::{eta_quotient, QSeries};
use super::ModularError;

/// Newform label `level.weight.character_orbit.newform_orbit`, e.g. `8.4.a.a`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Label {
    pub level: u32,
    pub weight: u32,
    pub char_orbit: String,
    pub orbit: String,
}

struct Cursor<'a> {
    s: &'a [u8],
    pos: usize,
}

impl Cursor<'_> {
    fn number(&mut self) -> Option<u32> {
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos || self.s[start] == b'0' {
            return None;
        }
        std::str::from_utf8(&self.s[start..self.pos]).ok()?.parse().ok()
    }

    fn letters(&mut self) -> Option<String> {
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_lowercase() {
            self.pos += 1;
        }
        (start < self.pos).then(|| String::from_utf8_lossy(&self.s[start..self.pos]).into_owned())
    }

    fn dot(&mut self) -> Option<()> {
        (self.s.get(self.pos) == Some(&b'.')).then(|| self.pos += 1)
    }
}

impl FromStr for Label {
    type Err = ModularError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut c = Cursor { s: s.as_bytes(), pos: 0 };
        let parsed = (|| {
            let level = c.number()?;
            c.dot()?;
            let weight = c.number()?;
            c.dot()?;
            let char_orbit = c.letters()?;
            c.dot()?;
            let orbit = c.letters()?;
            (c.pos == c.s.len()).then_some(Label { level, weight, char_orbit, orbit })
        })();
        parsed.ok_or_else(|| ModularError::UnknownLabel(s.into()))
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}.{}.{}", self.level, self.weight, self.char_orbit, self.orbit)
    }
}

/// Integer combination of eta products, `sum c_i prod eta(delta tau)^r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EtaCombination {
    pub terms: Vec<(i64, Vec<(Rational, i64)>)>,
}

impl EtaCombination {
    pub fn single(spec: &[(i64, i64)]) -> Self {
        EtaCombination { terms: vec![(1, spec.iter().map(|&(d, r)| (Rational::from_integer(d), r)).collect())] }
    }

    /// Substitute `tau -> s * tau`.
    pub fn rescale(&self, s: Rational) -> Self {
        EtaCombination {
            terms: self.terms.iter().map(|(c, t)| (*c, t.iter().map(|(d, r)| (d * s, *r)).collect())).collect(),
        }
    }

    /// q-expansion with coefficients for all exponents below `order`.
    pub fn qseries(&self, order: usize) -> Result<QSeries, ModularError> {
        let mut acc: Option<QSeries> = None;
        for (c, spec) in &self.terms {
            let den = spec.iter().fold(1i64, |a, (d, _)| num_integer::Integer::lcm(&a, d.denom()));
            let lead = spec.iter().fold(Rational::from_integer(0), |a, (d, r)| a + d * Rational::from_integer(*r)) / 24;
            let skip = (lead * den).floor().to_integer().max(0) as usize;
            let n = (order * den as usize).saturating_sub(skip);
            let s = eta_quotient(spec, n)?.scale(&BigInt::from(*c));
            acc = Some(match acc {
                None => s,
                Some(a) => a.add(&s)?,
            });
        }
        acc.ok_or(ModularError::BadEtaSpec)
    }

    /// Coefficients `a_1 .. a_n` of a form with integral exponents.
    pub fn coefficients(&self, n: usize) -> Result<Vec<i64>, ModularError> {
        let s = self.qseries(n + 1)?;
        (1..=n as i64)
            .map(|k| {
                let c = s.coeff_int(k).ok_or(ModularError::BadEtaSpec)?;
                c.to_i64().ok_or_else(|| ModularError::NonIntegralCoefficients("coefficient overflows i64".into()))
            })
            .collect()
    }
}

/// Forms with a closed eta expression: `(name, weight, level, expression)`.
pub fn builtin_eta(name: &str) -> Option<(u32, u32, EtaCombination)> {
    let one = |v: &[(i64, i64)]| EtaCombination::single(v);
    Some(match name {
        "eta(4t)^6" => (3, 16, one(&[(4, 6)])),
        "eta(2t)^3eta(6t)^3" => (3, 12, one(&[(2, 3), (6, 3)])),
        "eta(12t)^2" => (1, 144, one(&[(12, 2)])),
        "eta(4t)eta(20t)" => (1, 80, one(&[(4, 1), (20, 1)])),
        "4.6.a.a" => (6, 4, one(&[(2, 12)])),
        "8.4.a.a" => (4, 8, one(&[(2, 4), (4, 4)])),
        // f(tau/2) = eta(tau)^12 + 32 eta(tau)^4 eta(4tau)^8
        "8.6.a.a" => (
            6,
            8,
            EtaCombination {
                terms: vec![
                    (1, vec![(Rational::from_integer(2), 12)]),
                    (32, vec![(Rational::from_integer(2), 4), (Rational::from_integer(8), 8)]),
                ],
            },
        ),
        _ => return None,
    })
}

pub const BUILTIN_ETA_NAMES: [&str; 7] =
    ["eta(4t)^6", "eta(2t)^3eta(6t)^3", "eta(12t)^2", "eta(4t)eta(20t)", "4.6.a.a", "8.4.a.a", "8.6.a.a"];

/// On-disk coefficient record, one file per label.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Fixture {
    pub label: String,
    pub weight: u32,
    pub level: u32,
    pub an: Vec<i64>,
    pub source: String,
    pub fetched_at: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fe_sign: Option<i8>,
}

#[derive(Clone, Debug)]
pub struct FixtureStore {
    pub dir: PathBuf,
}

impl FixtureStore {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        FixtureStore { dir: dir.into() }
    }

    /// `HGM_FIXTURES` if set, else the fixtures shipped with the repository.
    pub fn default_location() -> Self {
        match std::env::var_os("HGM_FIXTURES") {
            Some(d) => FixtureStore::new(d),
            None => FixtureStore::new(Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/newforms")),
        }
    }

    fn path(&self, label: &str) -> PathBuf {
        self.dir.join(format!("{label}.json"))
    }

    pub fn load(&self, label: &str) -> Result<Option<Fixture>, ModularError> {
        let p = self.path(label);
        if !p.exists() {
            return Ok(None);
        }
        let text = fs::read_to_string(&p).map_err(|e| ModularError::Fixture(format!("{}: {e}", p.display())))?;
        let f: Fixture = serde_json::from_str(&text).map_err(|e| ModularError::Fixture(format!("{}: {e}", p.display())))?;
        if f.label != label {
            return Err(ModularError::Fixture(format!("{} holds label {}", p.display(), f.label)));
        }
        Ok(Some(f))
    }

    /// Write through a temporary file and rename, so readers never see a partial file.
    pub fn save(&self, f: &Fixture) -> Result<(), ModularError> {
        let err = |e: std::io::Error| ModularError::Fixture(e.to_string());
        fs::create_dir_all(&self.dir).map_err(err)?;
        let tmp = self.dir.join(format!(".{}.{}.tmp", f.label, std::process::id()));
        let text = serde_json::to_string(f).map_err(|e| ModularError::Fixture(e.to_string()))?;
        let mut fh = fs::File::create(&tmp).map_err(err)?;
        fh.write_all(text.as_bytes()).map_err(err)?;
        fh.sync_all().map_err(err)?;
        fs::rename(&tmp, self.path(&f.label)).map_err(err)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoefficientSource {
    Eta(EtaCombination),
    Fixture(PathBuf),
    Remote(String),
}

/// A normalized newform with a cached coefficient list `an[n - 1] = a_n`.
#[derive(Clone, Debug)]
pub struct NewformHandle {
    pub label: String,
    pub weight: u32,
    pub level: u32,
    pub source: CoefficientSource,
    pub an: Vec<i64>,
    pub fe_sign: Option<i8>,
}

impl NewformHandle {
    pub fn a(&self, n: usize) -> Result<i64, ModularError> {
        if n == 0 {
            return Err(ModularError::BadArgument("a_0 requested".into()));
        }
        self.an
            .get(n - 1)
            .copied()
            .ok_or_else(|| ModularError::CoefficientUnavailable(format!("{} has {} coefficients, a_{n} requested", self.label, self.an.len())))
    }
}

/// Resolves names and labels to coefficient lists: eta formulas, then fixtures, then the network.
#[derive(Clone, Debug)]
pub struct CoefficientProvider {
    pub store: FixtureStore,
    pub offline: bool,
    pub client: LmfdbClient,
}

impl Default for CoefficientProvider {
    fn default() -> Self {
        CoefficientProvider { store: FixtureStore::default_location(), offline: false, client: LmfdbClient::from_env() }
    }
}

impl CoefficientProvider {
    pub fn offline() -> Self {
        CoefficientProvider { offline: true, ..Default::default() }
    }

    /// Handle with at least `n` coefficients.
    pub fn handle(&self, name: &str, n: usize) -> Result<NewformHandle, ModularError> {
        if let Some((weight, level, eta)) = builtin_eta(name) {
            let an = eta.coefficients(n)?;
            let fe_sign = self.store.load(name).ok().flatten().and_then(|f| f.fe_sign);
            return Ok(NewformHandle { label: name.into(), weight, level, source: CoefficientSource::Eta(eta), an, fe_sign });
        }
        let label: Label = name.parse()?;
        let key = label.to_string();
        if let Some(f) = self.store.load(&key)? {
            if f.an.len() >= n {
                return Ok(NewformHandle {
                    label: key.clone(),
                    weight: f.weight,
                    level: f.level,
                    source: CoefficientSource::Fixture(self.store.path(&key)),
                    an: f.an,
                    fe_sign: f.fe_sign,
                });
            }
        }
        if self.offline {
            return Err(ModularError::CoefficientUnavailable(format!("{key}: no fixture with {n} coefficients and network disabled")));
        }
        let f = self.client.fetch(&label, n)?;
        self.store.save(&f)?;
        Ok(NewformHandle {
            label: key,
            weight: f.weight,
            level: f.level,
            source: CoefficientSource::Remote(self.client.base_url.clone()),
            an: f.an,
            fe_sign: None,
        })
    }

    /// `a_p` of the named form.
    pub fn ap(&self, name: &str, p: u64) -> Result<i64, ModularError> {
        self.handle(name, p as usize)?.a(p as usize)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn label_grammar() {
        let l: Label = "8.4.a.a".parse().unwrap();
        assert_eq!((l.level, l.weight, l.char_orbit.as_str(), l.orbit.as_str()), (8, 4, "a", "a"));
        assert_eq!(l.to_string(), "8.4.a.a");
        assert_eq!("200.2.a.bd".parse::<Label>().unwrap().orbit, "bd");
        for bad in ["8.4a.a", "8.4.a", "8.4.a.a.", "08.4.a.a", "8.4.A.a", "", "8..a.a", "x.4.a.a", "8.4.a.1"] {
            assert!(matches!(bad.parse::<Label>(), Err(ModularError::UnknownLabel(_))), "{bad}");
        }
    }

    #[test]
    fn builtin_coefficients() {
        let p = CoefficientProvider::offline();
        assert_eq!(p.ap("eta(4t)^6", 5).unwrap(), -6);
        assert_eq!(p.ap("eta(4t)^6", 7).unwrap(), 0);
        assert_eq!(p.ap("8.4.a.a", 3).unwrap(), -4);
        assert_eq!(p.handle("8.6.a.a", 7).unwrap().an, vec![1, 0, 20, 0, -74, 0, -24]);
        assert_eq!(p.handle("4.6.a.a", 5).unwrap().an, vec![1, 0, -12, 0, 54]);
    }

    #[test]
    fn offline_without_fixture() {
        let dir = std::env::temp_dir().join(format!("hgm-empty-{}", std::process::id()));
        let p = CoefficientProvider { store: FixtureStore::new(&dir), offline: true, client: LmfdbClient::new("http://127.0.0.1:9") };
        assert!(matches!(p.ap("11.2.a.a", 5), Err(ModularError::CoefficientUnavailable(_))));
        assert!(matches!(p.ap("11.2a.a", 5), Err(ModularError::UnknownLabel(_))));
    }

    #[test]
    fn fixture_roundtrip() {
        let dir = std::env::temp_dir().join(format!("hgm-fx-{}", std::process::id()));
        let store = FixtureStore::new(&dir);
        let f = Fixture {
            label: "11.2.a.a".into(),
            weight: 2,
            level: 11,
            an: vec![1, -2, -1, 2, 1],
            source: "test".into(),
            fetched_at: "2024-01-01T00:00:00Z".into(),
            fe_sign: Some(1),
        };
        store.save(&f).unwrap();
        assert_eq!(store.load("11.2.a.a").unwrap(), Some(f));
        assert_eq!(store.load("11.2.a.b").unwrap(), None);
        fs::remove_dir_all(dir).ok();
    }
}
