use std::thread;
use std::time::Duration;

use serde_json::Value;

use super::newform::{Fixture, Label};
use super::ModularError;

pub const BASE_URL_VAR: &str = "HGM_LMFDB_URL";
pub const DEFAULT_BASE_URL: &str = "https://www.lmfdb.org";

/// Minimal client for the newform coefficient endpoint.
#[derive(Clone, Debug)]
pub struct LmfdbClient {
    pub base_url: String,
    pub timeout: Duration,
    pub retries: u32,
    pub backoff: Duration,
}

impl LmfdbClient {
    pub fn new(base_url: &str) -> Self {
        LmfdbClient {
            base_url: base_url.trim_end_matches('/').to_string(),
            timeout: Duration::from_secs(10),
            retries: 3,
            backoff: Duration::from_millis(500),
        }
    }

    pub fn from_env() -> Self {
        Self::new(&std::env::var(BASE_URL_VAR).unwrap_or_else(|_| DEFAULT_BASE_URL.to_string()))
    }

    pub fn url(&self, label: &Label) -> String {
        format!("{}/api/mf_newforms/?label={label}&_format=json&_fields=label,level,weight,dim,traces", self.base_url)
    }

    fn get(&self, url: &str) -> Result<String, String> {
        let agent: ureq::Agent = ureq::Agent::config_builder().timeout_global(Some(self.timeout)).build().into();
        let mut resp = agent.get(url).call().map_err(|e| e.to_string())?;
        resp.body_mut().read_to_string().map_err(|e| e.to_string())
    }

    /// Fetch `a_1 .. a_n` for a label; retries with exponential backoff.
    pub fn fetch(&self, label: &Label, n: usize) -> Result<Fixture, ModularError> {
        let url = self.url(label);
        let mut last = String::new();
        for attempt in 0..self.retries {
            if attempt > 0 {
                thread::sleep(self.backoff * 2u32.pow(attempt - 1));
            }
            match self.get(&url) {
                Ok(body) => return parse_response(label, &body, n, &url),
                Err(e) => last = e,
            }
        }
        Err(ModularError::Network(format!("{url}: {last}")))
    }
}

fn parse_response(label: &Label, body: &str, n: usize, url: &str) -> Result<Fixture, ModularError> {
    let bad = |m: &str| ModularError::Network(format!("{url}: {m}"));
    let v: Value = serde_json::from_str(body).map_err(|e| bad(&e.to_string()))?;
    let rec = v
        .get("data")
        .and_then(Value::as_array)
        .and_then(|d| d.first())
        .ok_or_else(|| ModularError::UnknownLabel(label.to_string()))?;
    if rec.get("dim").and_then(Value::as_u64).unwrap_or(1) != 1 {
        return Err(ModularError::NonIntegralCoefficients(format!("{label} has dimension > 1")));
    }
    let traces = rec.get("traces").and_then(Value::as_array).ok_or_else(|| bad("no traces"))?;
    if traces.len() < n {
        return Err(ModularError::CoefficientUnavailable(format!("{label}: server returned {} coefficients, {n} requested", traces.len())));
    }
    let an = traces
        .iter()
        .map(|t| t.as_i64().ok_or_else(|| ModularError::NonIntegralCoefficients(format!("{label}: {t}"))))
        .collect::<Result<Vec<i64>, _>>()?;
    Ok(Fixture {
        label: label.to_string(),
        weight: rec.get("weight").and_then(Value::as_u64).map_or(label.weight, |w| w as u32),
        level: rec.get("level").and_then(Value::as_u64).map_or(label.level, |l| l as u32),
        an,
        source: url.to_string(),
        fetched_at: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
        fe_sign: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modular_forms::{CoefficientProvider, FixtureStore};
    use std::io::{BufRead, BufReader, Write};
    use std::net::TcpListener;

    /// Serves the given (status, body) responses in order, one per connection.
    fn mock(responses: Vec<(u16, String)>) -> String {
        let listener = TcpListener::bind("127.0.0.1:0").unwrap();
        let addr = listener.local_addr().unwrap();
        thread::spawn(move || {
            for (status, body) in responses {
                let (mut s, _) = listener.accept().unwrap();
                let mut r = BufReader::new(s.try_clone().unwrap());
                let mut line = String::new();
                while r.read_line(&mut line).unwrap() > 2 {
                    line.clear();
                }
                let reason = if status == 200 { "OK" } else { "Error" };
                write!(s, "HTTP/1.1 {status} {reason}\r\nContent-Type: application/json\r\nContent-Length: {}\r\nConnection: close\r\n\r\n{body}", body.len()).unwrap();
            }
        });
        format!("http://{addr}")
    }

    fn client(url: &str) -> LmfdbClient {
        LmfdbClient { backoff: Duration::from_millis(10), ..LmfdbClient::new(url) }
    }

    #[test]
    fn fetch_retries_then_writes_fixture() {
        let body = r#"{"data":[{"label":"11.2.a.a","level":11,"weight":2,"dim":1,"traces":[1,-2,-1,2,1,2,-2,0,-2,-2]}]}"#;
        let url = mock(vec![(500, "{}".into()), (200, body.into())]);
        let dir = std::env::temp_dir().join(format!("hgm-mock-{}", std::process::id()));
        let p = CoefficientProvider { store: FixtureStore::new(&dir), offline: false, client: client(&url) };
        assert_eq!(p.ap("11.2.a.a", 7).unwrap(), -2);
        let f = p.store.load("11.2.a.a").unwrap().unwrap();
        assert_eq!(f.an.len(), 10);
        assert!(f.source.starts_with(&url));
        // the second call is served from the fixture; the mock has no responses left
        assert_eq!(p.ap("11.2.a.a", 5).unwrap(), 1);
        std::fs::remove_dir_all(dir).ok();
    }

    #[test]
    fn unknown_and_non_rational() {
        let url = mock(vec![(200, r#"{"data":[]}"#.into()), (200, r#"{"data":[{"dim":2,"traces":[2,0,1]}]}"#.into())]);
        let c = client(&url);
        let l: Label = "11.2.a.z".parse().unwrap();
        assert!(matches!(c.fetch(&l, 3), Err(ModularError::UnknownLabel(_))));
        assert!(matches!(c.fetch(&l, 3), Err(ModularError::NonIntegralCoefficients(_))));
    }

    #[test]
    fn network_failure_after_retries() {
        let c = client("http://127.0.0.1:9");
        let l: Label = "11.2.a.a".parse().unwrap();
        assert!(matches!(c.fetch(&l, 3), Err(ModularError::Network(_))));
    }
}
