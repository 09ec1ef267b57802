use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use pma::audit::DEFAULT_CAP;
use pma::error::{Error, Result};
use pma::harness::{
    cost_table, parse_range, render, run_audit_suite, run_protocol, select_cases, DatasetSource, Format, RunConfig,
};
use pma::model::Variant;

/// Private membership aggregation simulator.
#[derive(Parser)]
#[command(name = "pma", version)]
struct Cli {
    /// Emit JSON.
    #[arg(long, global = true, conflicts_with = "csv")]
    json: bool,
    /// Emit CSV.
    #[arg(long, global = true)]
    csv: bool,
    /// JSON run config; command line flags override its fields.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a scheme and report counts and communication.
    Run(RunArgs),
    /// Run the exhaustive privacy audits.
    Audit(AuditArgs),
    /// Measure communication over a range of party counts.
    Costs(CostArgs),
}

#[derive(Args)]
struct SchemeArgs {
    /// pma1, spma1, spma2 or pma2.
    #[arg(long)]
    variant: Option<Variant>,
    #[arg(long)]
    m: Option<usize>,
    /// Databases per party (default: smallest feasible).
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    t: Option<usize>,
    /// One value, or one per party separated by commas.
    #[arg(long, value_delimiter = ',')]
    y: Option<Vec<usize>>,
    #[arg(long)]
    t2: Option<usize>,
    #[arg(long)]
    e: Option<usize>,
    /// Field modulus (default: smallest prime above max(M, MN+1)).
    #[arg(long)]
    p: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    scheme: SchemeArgs,
    /// Element index, or `all`.
    #[arg(long)]
    theta: Option<String>,
    /// Dataset JSON file.
    #[arg(long, conflicts_with = "probs")]
    datasets: Option<PathBuf>,
    /// Membership probabilities for generated datasets.
    #[arg(long, value_delimiter = ',')]
    probs: Option<Vec<f64>>,
}

#[derive(Args)]
struct AuditArgs {
    /// `all` or `lemma1` .. `lemma7`; may be repeated.
    #[arg(long, value_delimiter = ',')]
    suite: Option<Vec<String>>,
    /// Largest number of assignments one enumeration may visit.
    #[arg(long, default_value_t = DEFAULT_CAP)]
    cap: u64,
}

#[derive(Args)]
struct CostArgs {
    #[command(flatten)]
    scheme: SchemeArgs,
    /// Party counts, e.g. 2..6.
    #[arg(long)]
    sweep_m: String,
    /// Threshold K of the reference growth column M^K(K-1).
    #[arg(long, default_value_t = 3)]
    k: u32,
}

fn base_config(cli: &Cli, s: &SchemeArgs, fallback_m: Option<usize>) -> Result<RunConfig> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::from_file(path)?,
        None => {
            let variant = s.variant.ok_or_else(|| Error::Param("--variant is required without --config".into()))?;
            let m = s.m.or(fallback_m).ok_or_else(|| Error::Param("--m is required without --config".into()))?;
            let mut c = RunConfig::new(variant, m, 0);
            c.e = None;
            c
        }
    };
    if let Some(v) = s.variant {
        cfg.variant = v;
    }
    if let Some(m) = s.m {
        cfg.m = m;
    }
    if s.n.is_some() {
        cfg.n = s.n;
    }
    if let Some(t) = s.t {
        cfg.t = t;
    }
    if let Some(y) = &s.y {
        cfg.y = y.clone();
    }
    if let Some(t2) = s.t2 {
        cfg.t2 = t2;
    }
    if s.e.is_some() {
        cfg.e = s.e;
    }
    if s.p.is_some() {
        cfg.p = s.p;
    }
    if let Some(seed) = s.seed {
        cfg.seed = seed;
    }
    Ok(cfg)
}

fn format(cli: &Cli) -> Format {
    if cli.json {
        Format::Json
    } else if cli.csv {
        Format::Csv
    } else {
        Format::Table
    }
}

fn execute(cli: &Cli) -> Result<i32> {
    let fmt = format(cli);
    match &cli.cmd {
        Cmd::Run(a) => {
            let mut cfg = base_config(cli, &a.scheme, None)?;
            match a.theta.as_deref() {
                None => {}
                Some("all") => cfg.theta = None,
                Some(t) => {
                    cfg.theta = Some(t.parse().map_err(|_| Error::Param(format!("--theta expects a number or all, got {t:?}")))?)
                }
            }
            if let Some(path) = &a.datasets {
                cfg.datasets = DatasetSource::File { path: path.clone() };
            }
            if let Some(probs) = &a.probs {
                cfg.datasets = DatasetSource::Generated { probs: probs.clone() };
            }
            let report = run_protocol(&cfg)?;
            print!("{}", render(&report, fmt)?);
            if cfg.audits.is_empty() {
                return Ok(0);
            }
            let suite = run_audit_suite(&select_cases(&cfg.audits)?, DEFAULT_CAP);
            print!("{}", render(&suite, fmt)?);
            Ok(suite.exit_code())
        }
        Cmd::Audit(a) => {
            let selectors = match (&a.suite, &cli.config) {
                (Some(s), _) => s.clone(),
                (None, Some(path)) => RunConfig::from_file(path)?.audits,
                (None, None) => vec!["all".into()],
            };
            let suite = run_audit_suite(&select_cases(&selectors)?, a.cap);
            print!("{}", render(&suite, fmt)?);
            Ok(suite.exit_code())
        }
        Cmd::Costs(a) => {
            let range = parse_range(&a.sweep_m)?;
            let cfg = base_config(cli, &a.scheme, Some(*range.start()))?;
            let table = cost_table(&cfg, range, a.k)?;
            print!("{}", render(&table, fmt)?);
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
