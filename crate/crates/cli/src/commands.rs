use std::sync::Arc;
use std::time::Instant;

use hgm_core::char_sums::{
    euler_factor_prim, ff_identity_check, h_value, lambda_in_field, p_normalized, HMethod, IdentityParams, OneDim,
    K3_MAX_P, SWEEP_MAX_Q,
};
use hgm_core::classical_series::{random_terminating_tuples, whipple_check, WhippleMode};
use hgm_core::ff_core::FiniteFieldTable;
use hgm_core::hg_datum::{parse_rational, EProfile, HGDatum, Rational, WhippleFamily};
use hgm_core::modular_forms::CoefficientProvider;
use hgm_core::padic_congruence::{supercongruence_check, CASES};
use hgm_core::period_integrator::{verify_period, PERIOD_CASES};
use hgm_core::report::{ReportItem, Status, VerificationReport};
use hgm_core::tables::{self, check_row, evaluate, Which};

use crate::error::CliError;
use crate::pool::{run_all, Job};
use crate::{Command, Compute, FieldArgs, Global, IdentityArg, TableArg, WhippleModeArg};

type JobResult = Result<VerificationReport, CliError>;

fn provider(g: &Global) -> CoefficientProvider {
    if g.offline {
        CoefficientProvider::offline()
    } else {
        CoefficientProvider::default()
    }
}

/// Runs the jobs and merges their reports in job order; the first error wins.
fn gather(suite: &str, jobs: Vec<Job<JobResult>>, g: &Global) -> JobResult {
    let mut rep = VerificationReport::new(suite);
    for r in run_all(jobs, g.parallel) {
        rep.extend(r?);
    }
    Ok(rep)
}

pub fn run(cmd: &Command, g: &Global) -> JobResult {
    match cmd {
        Command::Tables { which, pair, pmin, pmax } => tables_cmd(*which, pair.as_deref(), *pmin, *pmax, g),
        Command::Identities { which, qmax, samples } => identities_cmd(*which, *qmax, *samples, g),
        Command::Congruences { case, pmin, pmax, k } => congruences_cmd(case, *pmin, *pmax, *k, g),
        Command::Periods { case, bits } => periods_cmd(case, *bits, g),
        Command::WhippleClassical { mode, count, bits } => whipple_cmd(*mode, *count, *bits, g),
        Command::Compute(c) => compute_cmd(c, g),
    }
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

/// Odd prime powers `q = p^s` in `[lo, hi]`.
fn prime_powers(lo: u32, hi: u32) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    for p in (3..=hi).filter(|&p| is_prime(p as u64)) {
        let mut q = p as u64;
        let mut s = 1;
        while q <= hi as u64 {
            if q >= lo as u64 {
                out.push((p, s));
            }
            q *= p as u64;
            s += 1;
        }
    }
    out.sort_by_key(|&(p, s)| p.pow(s));
    out
}

fn parse_pair(s: &str) -> Result<(Rational, Rational), CliError> {
    let (c, f) = s.split_once(',').ok_or_else(|| CliError::Usage(format!("--pair expects c,f, got '{s}'")))?;
    Ok((parse_rational(c)?, parse_rational(f)?))
}

fn tables_cmd(which: TableArg, pair: Option<&str>, pmin: u32, pmax: u32, g: &Global) -> JobResult {
    let which = match which {
        TableArg::Hd1 => Which::Hd1,
        TableArg::Hd2 => Which::Hd2,
        TableArg::Hd3 => Which::Hd3,
    };
    let mut rows = tables::rows(which)?;
    if let Some(sel) = pair {
        let (c, f) = parse_pair(sel)?;
        rows.retain(|r| (r.family.c, r.family.f) == (c, f) || (r.family.c, r.family.f) == (f, c));
        if rows.is_empty() {
            return Err(CliError::Usage(format!("no {} row for pair {sel}", which.id())));
        }
    }
    let prov = Arc::new(provider(g));
    let mut jobs: Vec<Job<JobResult>> = Vec::new();
    for row in rows {
        let row = Arc::new(row);
        for p in (pmin..=pmax).filter(|&p| row.applies(p)) {
            let (row, prov) = (Arc::clone(&row), Arc::clone(&prov));
            jobs.push(Box::new(move || {
                let mut r = VerificationReport::new("row");
                r.push(check_row(&row, p, &prov)?);
                Ok(r)
            }));
        }
    }
    gather(&format!("tables:{}", which.id()), jobs, g)
}

fn field(p: u32, s: u32) -> Result<FiniteFieldTable, CliError> {
    FiniteFieldTable::build(p, s).map_err(|e| CliError::Usage(e.to_string()))
}

fn identity_job(id: &'static str, params: IdentityParams, p: u32, s: u32) -> Job<JobResult> {
    Box::new(move || Ok(ff_identity_check(id, &params, &field(p, s)?)?))
}

fn identities_cmd(which: IdentityArg, qmax: u32, samples: usize, g: &Global) -> JobResult {
    let all = which == IdentityArg::All;
    let want = |w: IdentityArg| all || which == w;
    let base = IdentityParams { seed: g.seed, samples, ..IdentityParams::default() };
    let mut jobs: Vec<Job<JobResult>> = Vec::new();
    let sweep_max = qmax.min(SWEEP_MAX_Q);
    for (p, s) in prime_powers(5, sweep_max) {
        for (w, id) in [
            (IdentityArg::Kummer, "kummer"),
            (IdentityArg::Clausen, "clausen"),
            (IdentityArg::Wellposed, "wellposed_6P5"),
            (IdentityArg::Gauss2p1, "gauss_2P1"),
        ] {
            if want(w) {
                jobs.push(identity_job(id, base.clone(), p, s));
            }
        }
    }
    if want(IdentityArg::K3) {
        for p in (5..=qmax.min(K3_MAX_P)).filter(|&p| is_prime(p as u64)) {
            for lam in [2, 3, -1] {
                if (lam as i64).rem_euclid(p as i64) <= 1 {
                    continue;
                }
                let params = IdentityParams { lambda: Rational::from_integer(lam), ..base.clone() };
                jobs.push(identity_job("k3_count", params, p, 1));
            }
        }
    }
    let seven = WhippleFamily::seven();
    if want(IdentityArg::Vanishing) {
        for fam in seven.iter().filter(|f| f.n == 2 * f.m) {
            for (p, s) in prime_powers(5, qmax) {
                let q = p.pow(s);
                if q % 4 == 3 && (q - 1) % fam.m == 0 {
                    let params = IdentityParams { pair: Some((fam.c, fam.f)), ..base.clone() };
                    jobs.push(identity_job("hd3_vanishing", params, p, s));
                }
            }
        }
    }
    if want(IdentityArg::WhippleFf) {
        let prov = Arc::new(provider(g));
        for fam in seven {
            for p in (7..=qmax).filter(|&p| is_prime(p as u64) && (p - 1) % fam.n == 0) {
                let (fam, prov) = (fam.clone(), Arc::clone(&prov));
                let base = base.clone();
                jobs.push(Box::new(move || {
                    // expected value: the f-term of the matching HD1 table row
                    let rows = tables::rows(Which::Hd1)?;
                    let row = rows.iter().find(|r| (r.family.c, r.family.f) == (fam.c, fam.f) || (r.family.c, r.family.f) == (fam.f, fam.c));
                    let f_term = match row {
                        Some(r) => Some(evaluate(&r.terms[..1], p, &prov)?),
                        None => None,
                    };
                    let params = IdentityParams { pair: Some((fam.c, fam.f)), f_term, ..base };
                    Ok(ff_identity_check("whipple_ff", &params, &field(p, 1)?)?)
                }));
            }
        }
    }
    if jobs.is_empty() {
        return Err(CliError::Usage(format!("no field with q <= {qmax} satisfies the hypotheses")));
    }
    gather("identities", jobs, g)
}

fn congruences_cmd(case: &str, pmin: u64, pmax: u64, k: Option<u32>, g: &Global) -> JobResult {
    let cases: Vec<_> = if case == "all" {
        CASES.iter().collect()
    } else {
        let c = CASES.iter().find(|c| c.id == case).ok_or_else(|| {
            let ids: Vec<_> = CASES.iter().map(|c| c.id).collect();
            CliError::Usage(format!("unknown case '{case}' (known: {})", ids.join(", ")))
        })?;
        vec![c]
    };
    let prov = Arc::new(provider(g));
    let mut jobs: Vec<Job<JobResult>> = Vec::new();
    for c in cases {
        for p in (pmin.max(c.min_prime)..=pmax).filter(|&p| is_prime(p)) {
            let prov = Arc::clone(&prov);
            let id = c.id;
            jobs.push(Box::new(move || {
                let o = supercongruence_check(id, p, k, &prov)?;
                let mut r = VerificationReport::new("congruence");
                r.push(o.to_item());
                Ok(r)
            }));
        }
    }
    gather("congruences", jobs, g)
}

fn periods_cmd(case: &str, bits: u32, g: &Global) -> JobResult {
    let ids: Vec<&'static str> = if case == "all" {
        PERIOD_CASES.iter().map(|c| c.id).collect()
    } else {
        let c = PERIOD_CASES.iter().find(|c| c.id == case).ok_or_else(|| {
            let ids: Vec<_> = PERIOD_CASES.iter().map(|c| c.id).collect();
            CliError::Usage(format!("unknown period case '{case}' (known: {})", ids.join(", ")))
        })?;
        vec![c.id]
    };
    let jobs: Vec<Job<JobResult>> =
        ids.into_iter().map(|id| Box::new(move || Ok(verify_period(id, bits)?)) as Job<JobResult>).collect();
    gather("periods", jobs, g)
}

fn whipple_cmd(mode: WhippleModeArg, count: usize, bits: u32, g: &Global) -> JobResult {
    let mode = match mode {
        WhippleModeArg::Exact => WhippleMode::TerminatingExact,
        WhippleModeArg::Numeric => WhippleMode::Numeric { precision: bits },
    };
    let jobs: Vec<Job<JobResult>> = random_terminating_tuples(g.seed, count)
        .into_iter()
        .map(|t| Box::new(move || Ok(whipple_check(t, mode)?)) as Job<JobResult>)
        .collect();
    gather("whipple-classical", jobs, g)
}

fn parse_datum(s: &str) -> Result<HGDatum, CliError> {
    Ok(s.parse::<HGDatum>()?)
}

fn value_item(case: &str, parameters: String, value: String, started: Instant) -> VerificationReport {
    let mut r = VerificationReport::new(format!("compute:{case}"));
    r.push(ReportItem {
        case: case.to_string(),
        parameters,
        status: Status::Skipped,
        theorem: false,
        lhs: value,
        rhs: String::new(),
        discrepancy: None,
        runtime_ms: started.elapsed().as_millis() as u64,
    });
    r
}

fn field_and_lambda(a: &FieldArgs) -> Result<(HGDatum, FiniteFieldTable, Rational), CliError> {
    let datum = parse_datum(&a.datum)?;
    let f = field(a.p, a.s)?;
    let lambda = match &a.lambda {
        Some(l) => parse_rational(l)?,
        None => datum.lambda(),
    };
    Ok((datum.with_lambda(lambda)?, f, lambda))
}

fn compute_cmd(c: &Compute, g: &Global) -> JobResult {
    let t0 = Instant::now();
    match c {
        Compute::P(a) => {
            let (datum, f, lambda) = field_and_lambda(a)?;
            let lam = lambda_in_field(lambda, &f)?;
            let v = p_normalized(&datum, lam, &f)?;
            let shown = v.to_rational_integer().map(|x| x.to_string()).unwrap_or_else(|| v.to_string());
            Ok(value_item("P", format!("{datum} q={}", f.q()), shown, t0))
        }
        Compute::H { field: a, bits } => {
            let (datum, f, lambda) = field_and_lambda(a)?;
            let method = match bits {
                Some(b) => HMethod::Direct { precision: *b },
                None => HMethod::Exact,
            };
            let v = h_value(&datum, lambda, &f, method)?;
            Ok(value_item("H", format!("{datum} q={}", f.q()), v.value.to_string(), t0))
        }
        Compute::Euler { datum, p, one_dim, bits } => {
            let datum = parse_datum(datum)?;
            let od = match one_dim {
                None => None,
                Some(s) => {
                    let (d, k) = s.split_once(':').ok_or_else(|| CliError::Usage(format!("--one-dim expects DISC:POWER, got '{s}'")))?;
                    let bad = |_| CliError::Usage(format!("--one-dim expects integers, got '{s}'"));
                    Some(OneDim { disc: d.trim().parse().map_err(bad)?, power: k.trim().parse().map_err(bad)? })
                }
            };
            let e = euler_factor_prim(&datum, *p, od, *bits)?;
            Ok(value_item("euler", format!("{datum} p={p}"), e.to_string(), t0))
        }
        Compute::Ap { form, p } => {
            if !is_prime(*p) {
                return Err(CliError::Usage(format!("{p} is not prime")));
            }
            let v = provider(g).ap(form, *p)?;
            Ok(value_item("ap", format!("{form} p={p}"), v.to_string(), t0))
        }
        Compute::EProfile { datum } => {
            let d = parse_datum(datum)?;
            let e = EProfile::of(&d);
            let twist = e.twist.map(|t| t.to_string()).unwrap_or_else(|| "undefined".into());
            let v = format!("min={} max={} w={} t={twist}", e.min_e, e.max_e, e.weight);
            Ok(value_item("e-profile", d.to_string(), v, t0))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_power_listing() {
        let qs: Vec<u32> = prime_powers(5, 27).iter().map(|&(p, s)| p.pow(s)).collect();
        assert_eq!(qs, vec![5, 7, 9, 11, 13, 17, 19, 23, 25, 27]);
    }

    #[test]
    fn pair_parsing() {
        assert_eq!(parse_pair("1/2,1/3").unwrap(), (Rational::new(1, 2), Rational::new(1, 3)));
        assert!(matches!(parse_pair("1/2"), Err(CliError::Usage(_))));
    }
}
