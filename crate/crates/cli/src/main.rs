//! `verify`: table sweeps, identity suites, congruences, periods and ad-hoc values.

mod commands;
mod error;
mod pool;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use error::CliError;
use hgm_core::report::{Status, VerificationReport};

#[derive(Parser, Debug)]
#[command(name = "verify", version, about = "Hypergeometric character sums, Whipple data and modular forms: verification runs")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// never contact the LMFDB; only eta formulas and fixtures are used
    #[arg(long, global = true)]
    pub offline: bool,
    /// write the report as JSON
    #[arg(long, global = true, value_name = "PATH")]
    pub json: Option<PathBuf>,
    /// write the report as CSV
    #[arg(long, global = true, value_name = "PATH")]
    pub csv: Option<PathBuf>,
    /// worker threads for (case, prime) jobs
    #[arg(long, global = true, default_value_t = 1, value_name = "N")]
    pub parallel: usize,
    /// seed for randomized sweeps
    #[arg(long, global = true, default_value_t = 20240101, value_name = "S")]
    pub seed: u64,
    /// record runtime_ms as 0 so repeated runs give identical reports
    #[arg(long, global = true)]
    pub no_timings: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// trace tables against modular forms
    Tables {
        #[arg(long, value_enum)]
        which: TableArg,
        /// restrict to one pair, e.g. 1/2,1/3
        #[arg(long)]
        pair: Option<String>,
        #[arg(long, default_value_t = 7)]
        pmin: u32,
        #[arg(long, default_value_t = 97)]
        pmax: u32,
    },
    /// finite-field identity suites
    Identities {
        #[arg(long, value_enum, default_value_t = IdentityArg::All)]
        which: IdentityArg,
        #[arg(long, default_value_t = 25)]
        qmax: u32,
        /// random tuples per field for the sampled identities
        #[arg(long, default_value_t = 10)]
        samples: usize,
    },
    /// truncated hypergeometric sums against their targets modulo p^k
    Congruences {
        /// case id or `all`
        #[arg(long, default_value = "all")]
        case: String,
        #[arg(long, default_value_t = 5)]
        pmin: u64,
        #[arg(long, default_value_t = 37)]
        pmax: u64,
        /// exponent of the modulus (default: the case's stated one)
        #[arg(long)]
        k: Option<u32>,
    },
    /// period integrals against hypergeometric values
    Periods {
        /// case id or `all`
        #[arg(long, default_value = "all")]
        case: String,
        #[arg(long, default_value_t = 192)]
        bits: u32,
    },
    /// Whipple's 7F6 transformation over Q
    WhippleClassical {
        #[arg(long, value_enum, default_value_t = WhippleModeArg::Exact)]
        mode: WhippleModeArg,
        /// number of random terminating tuples
        #[arg(long, default_value_t = 25)]
        count: usize,
        /// working precision of the numeric mode
        #[arg(long, default_value_t = 192)]
        bits: u32,
    },
    /// ad-hoc values
    #[command(subcommand)]
    Compute(Compute),
}

#[derive(Subcommand, Debug)]
pub enum Compute {
    /// normalized P(alpha, beta; lambda; F_q)
    #[command(name = "P", alias = "p")]
    P(FieldArgs),
    /// H_q(alpha, beta; lambda)
    #[command(name = "H", alias = "h")]
    H {
        #[command(flatten)]
        field: FieldArgs,
        /// use the Gauss-sum formula at this precision instead of the exact route
        #[arg(long)]
        bits: Option<u32>,
    },
    /// Euler factor of the primitive part at p (lambda = 1)
    Euler {
        #[arg(long)]
        datum: String,
        #[arg(long)]
        p: u32,
        /// one-dimensional part to remove, as DISC:POWER (e.g. -3:1)
        #[arg(long, allow_hyphen_values = true)]
        one_dim: Option<String>,
        #[arg(long, default_value_t = 128)]
        bits: u32,
    },
    /// a_p of a newform label or eta product name
    Ap {
        #[arg(long)]
        form: String,
        #[arg(long)]
        p: u64,
    },
    /// e-function extremes, weight and Tate twist
    EProfile {
        #[arg(long)]
        datum: String,
    },
}

#[derive(Args, Debug, Clone)]
pub struct FieldArgs {
    /// `HD2(1/2,1/3)` or `alpha=1/2,1/2 beta=1,1 lambda=1`
    #[arg(long)]
    pub datum: String,
    #[arg(long)]
    pub p: u32,
    /// degree of F_q over F_p
    #[arg(long, default_value_t = 1)]
    pub s: u32,
    /// overrides the datum's lambda
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<String>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableArg {
    Hd1,
    Hd2,
    Hd3,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum IdentityArg {
    Clausen,
    Kummer,
    Wellposed,
    Gauss2p1,
    K3,
    Vanishing,
    WhippleFf,
    All,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum WhippleModeArg {
    Exact,
    Numeric,
}

fn finish(mut report: VerificationReport, g: &Global) -> Result<ExitCode, CliError> {
    if g.no_timings {
        for it in &mut report.items {
            it.runtime_ms = 0;
        }
    }
    print!("{}", report.to_table());
    let conjectural_fail: Vec<_> = report.items.iter().filter(|i| i.status == Status::Fail && !i.theorem).collect();
    if !conjectural_fail.is_empty() {
        println!("!! {} conjectural or interpretation-dependent item(s) FAILED:", conjectural_fail.len());
        for i in conjectural_fail {
            println!("!!   {} {}", i.case, i.parameters);
        }
    }
    if let Some(p) = &g.json {
        std::fs::write(p, report.to_json()).map_err(|e| CliError::Infra(format!("{}: {e}", p.display())))?;
    }
    if let Some(p) = &g.csv {
        std::fs::write(p, report.to_csv()).map_err(|e| CliError::Infra(format!("{}: {e}", p.display())))?;
    }
    Ok(if report.has_theorem_failure() { ExitCode::from(1) } else { ExitCode::SUCCESS })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli.command, &cli.global).and_then(|r| finish(r, &cli.global)) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
