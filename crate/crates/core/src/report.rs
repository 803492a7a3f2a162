//! Structured pass/fail records shared by every check.

use std::time::Instant;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    ConjecturalVerified,
    Inconclusive,
    Skipped,
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::ConjecturalVerified => "conjectural-verified",
            Status::Inconclusive => "inconclusive",
            Status::Skipped => "skipped",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportItem {
    pub case: String,
    pub parameters: String,
    pub status: Status,
    /// whether the case is a proven statement (failures count toward the exit code)
    pub theorem: bool,
    pub lhs: String,
    pub rhs: String,
    pub discrepancy: Option<f64>,
    pub runtime_ms: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub suite: String,
    pub items: Vec<ReportItem>,
    pub version: String,
    pub timestamp: String,
}

impl VerificationReport {
    pub fn new(suite: impl Into<String>) -> Self {
        VerificationReport {
            suite: suite.into(),
            items: Vec::new(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
        }
    }

    pub fn push(&mut self, item: ReportItem) {
        self.items.push(item);
    }

    pub fn extend(&mut self, other: VerificationReport) {
        self.items.extend(other.items);
    }

    /// Records an equality check between two displayed values.
    pub fn check(&mut self, case: &str, parameters: impl Into<String>, lhs: impl ToString, rhs: impl ToString, ok: bool, started: Instant) {
        self.items.push(ReportItem {
            case: case.to_string(),
            parameters: parameters.into(),
            status: if ok { Status::Pass } else { Status::Fail },
            theorem: true,
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
            discrepancy: None,
            runtime_ms: started.elapsed().as_millis() as u64,
        });
    }

    pub fn count(&self, s: Status) -> usize {
        self.items.iter().filter(|i| i.status == s).count()
    }

    pub fn all_pass(&self) -> bool {
        self.items.iter().all(|i| matches!(i.status, Status::Pass | Status::ConjecturalVerified | Status::Skipped))
    }

    /// True when some proven case failed.
    pub fn has_theorem_failure(&self) -> bool {
        self.items.iter().any(|i| i.theorem && i.status == Status::Fail)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }

    /// One row per item; suite, version and timestamp repeat on every row.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        for it in &self.items {
            w.serialize(CsvRow::from_item(self, it)).expect("csv row");
        }
        if self.items.is_empty() {
            w.serialize(CsvRow::header_only(self)).expect("csv row");
        }
        String::from_utf8(w.into_inner().expect("csv flush")).expect("utf8")
    }

    pub fn from_csv(s: &str) -> Result<Self, csv::Error> {
        let mut r = csv::Reader::from_reader(s.as_bytes());
        let mut rep: Option<VerificationReport> = None;
        for row in r.deserialize::<CsvRow>() {
            let row = row?;
            let rep = rep.get_or_insert_with(|| VerificationReport {
                suite: row.suite.clone(),
                items: Vec::new(),
                version: row.version.clone(),
                timestamp: row.timestamp.clone(),
            });
            if let Some(status) = row.status {
                rep.items.push(ReportItem {
                    case: row.case,
                    parameters: row.parameters,
                    status,
                    theorem: row.theorem,
                    lhs: row.lhs,
                    rhs: row.rhs,
                    discrepancy: row.discrepancy,
                    runtime_ms: row.runtime_ms,
                });
            }
        }
        Ok(rep.unwrap_or_else(|| VerificationReport::new("")))
    }

    /// Fixed-width human-readable table.
    pub fn to_table(&self) -> String {
        let mut out = format!("suite {} ({} items)\n", self.suite, self.items.len());
        for it in &self.items {
            out.push_str(&format!(
                "{:<22} {:<34} {:<21} lhs={} rhs={}\n",
                it.status.to_string(),
                it.case,
                it.parameters,
                it.lhs,
                it.rhs
            ));
        }
        out.push_str(&format!(
            "pass {}  fail {}  conjectural-verified {}  inconclusive {}  skipped {}\n",
            self.count(Status::Pass),
            self.count(Status::Fail),
            self.count(Status::ConjecturalVerified),
            self.count(Status::Inconclusive),
            self.count(Status::Skipped)
        ));
        out
    }
}

#[derive(Serialize, Deserialize)]
struct CsvRow {
    suite: String,
    version: String,
    timestamp: String,
    case: String,
    parameters: String,
    status: Option<Status>,
    theorem: bool,
    lhs: String,
    rhs: String,
    discrepancy: Option<f64>,
    runtime_ms: u64,
}

impl CsvRow {
    fn from_item(r: &VerificationReport, it: &ReportItem) -> Self {
        CsvRow {
            suite: r.suite.clone(),
            version: r.version.clone(),
            timestamp: r.timestamp.clone(),
            case: it.case.clone(),
            parameters: it.parameters.clone(),
            status: Some(it.status),
            theorem: it.theorem,
            lhs: it.lhs.clone(),
            rhs: it.rhs.clone(),
            discrepancy: it.discrepancy,
            runtime_ms: it.runtime_ms,
        }
    }

    fn header_only(r: &VerificationReport) -> Self {
        CsvRow {
            suite: r.suite.clone(),
            version: r.version.clone(),
            timestamp: r.timestamp.clone(),
            case: String::new(),
            parameters: String::new(),
            status: None,
            theorem: false,
            lhs: String::new(),
            rhs: String::new(),
            discrepancy: None,
            runtime_ms: 0,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> VerificationReport {
        let mut r = VerificationReport::new("demo");
        r.push(ReportItem {
            case: "a, \"quoted\"".into(),
            parameters: "p=7".into(),
            status: Status::Pass,
            theorem: true,
            lhs: "1".into(),
            rhs: "1".into(),
            discrepancy: Some(0.1 + 0.2),
            runtime_ms: 3,
        });
        r.push(ReportItem {
            case: "b".into(),
            parameters: "p=11\nline".into(),
            status: Status::ConjecturalVerified,
            theorem: false,
            lhs: String::new(),
            rhs: "x".into(),
            discrepancy: None,
            runtime_ms: 0,
        });
        r
    }

    #[test]
    fn json_round_trip() {
        let r = sample();
        assert_eq!(VerificationReport::from_json(&r.to_json()).unwrap(), r);
    }

    #[test]
    fn csv_round_trip() {
        let r = sample();
        assert_eq!(VerificationReport::from_csv(&r.to_csv()).unwrap(), r);
        let e = VerificationReport::new("empty");
        assert_eq!(VerificationReport::from_csv(&e.to_csv()).unwrap(), e);
    }

    #[test]
    fn failure_accounting() {
        let mut r = sample();
        assert!(!r.has_theorem_failure());
        r.items[1].status = Status::Fail;
        assert!(!r.has_theorem_failure());
        r.items[0].status = Status::Fail;
        assert!(r.has_theorem_failure());
    }
}
