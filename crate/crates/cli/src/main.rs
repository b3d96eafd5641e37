//! `hallforge`: class tables, products and verification suites on the command line.
//!
//! Exit status is 0 when every check passes, 1 when a check fails and 2 on a
//! configuration or resource error.

mod checks;
mod config;
mod literal;
mod report;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use hallforge::double::Double;
use hallforge::heredcat::open;

use config::{CapFlags, CheckName, Format, RunConfig};
use literal::Element;
use report::Report;

#[derive(Debug, Parser)]
#[command(name = "hallforge", version, about = "Exact Hall algebra computations over finite fields")]
struct Cli {
    /// Preset (a1, a2, jordan) or path to a JSON quiver document.
    #[arg(long, global = true, default_value = "a1")]
    quiver: String,
    /// Field size; must be prime. Defaults to 2, or to the quiver document's value.
    #[arg(long, global = true, value_parser = config::parse_prime)]
    q: Option<u64>,
    /// Total dimension bound for enumerated classes.
    #[arg(long, global = true, default_value_t = 2, value_parser = clap::value_parser!(u64).range(1..))]
    dim_bound: u64,
    /// Comma-separated checks for `verify`; all of them when omitted.
    #[arg(long, global = true, value_enum, value_delimiter = ',')]
    checks: Vec<CheckName>,
    /// Seed for sampled instances.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Report destination; stdout when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    cap_hom: Option<u64>,
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    cap_subspace: Option<u64>,
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    cap_complex: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List isomorphism classes up to the dimension bound.
    Classes,
    /// Multiply two element literals.
    Product { lhs: String, rhs: String },
    /// Run verification suites and report one line per instance.
    Verify,
}

enum Failure {
    Config(String),
    Checks,
}

impl From<hallforge::Error> for Failure {
    fn from(e: hallforge::Error) -> Self {
        Failure::Config(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Config(e.to_string())
    }
}

fn build_config(cli: &Cli) -> Result<RunConfig, Failure> {
    let spec = config::load_spec(&cli.quiver, cli.q)?;
    let env = std::env::var(config::CAPS_ENV).ok();
    let flags = CapFlags { hom: cli.cap_hom, subspace: cli.cap_subspace, complex: cli.cap_complex };
    let caps = config::resolve_caps(env.as_deref(), flags)?;
    let mut checks = if cli.checks.is_empty() {
        <CheckName as clap::ValueEnum>::value_variants().to_vec()
    } else {
        cli.checks.clone()
    };
    checks.sort_unstable();
    checks.dedup();
    Ok(RunConfig {
        quiver: cli.quiver.clone(),
        spec,
        dim_bound: cli.dim_bound as usize,
        caps,
        checks,
        seed: cli.seed,
        out: cli.out.clone(),
        format: cli.format,
    })
}

fn cmd_classes(cfg: &RunConfig) -> Result<Report, Failure> {
    let cat = open(cfg.spec.clone(), cfg.caps)?;
    let mut rows = Vec::new();
    for id in cat.classes_up_to(cfg.dim_bound)? {
        let class = cat.class(id)?;
        rows.push(json!({
            "id": id.0,
            "label": class.label,
            "dim": class.dim.entries(),
            "aut": cat.aut_order(id)?.to_string(),
            "end": cat.q().pow(cat.end_dim(id)? as u32).to_string(),
        }));
    }
    let summary = json!({"classes": rows.len()});
    Ok(Report { header: cfg.header("classes"), rows, summary })
}

fn cmd_product(cfg: &RunConfig, lhs: &str, rhs: &str) -> Result<Report, Failure> {
    let double = Double::open(open(cfg.spec.clone(), cfg.caps)?);
    let x = literal::evaluate(&double, &literal::parse(lhs)?)?;
    let y = literal::evaluate(&double, &literal::parse(rhs)?)?;
    let (algebra, terms) = match literal::multiply(&double, &x, &y)? {
        Element::Mrh(e) => ("mrh", serde_json::to_value(&e)),
        Element::He(e) => ("he", serde_json::to_value(&e)),
    };
    let rows = match terms.map_err(|e| Failure::Config(e.to_string()))? {
        Value::Array(rows) => rows,
        other => vec![other],
    };
    let mut header = cfg.header("product");
    header["lhs"] = json!(lhs);
    header["rhs"] = json!(rhs);
    let summary = json!({"algebra": algebra, "terms": rows.len()});
    Ok(Report { header, rows, summary })
}

fn cmd_verify(cfg: &RunConfig) -> Result<(Report, bool), Failure> {
    let ctx = checks::Ctx::new(open(cfg.spec.clone(), cfg.caps)?, cfg.dim_bound, cfg.seed);
    let mut rows = Vec::new();
    let mut per_check = BTreeMap::new();
    let mut failed_total = 0usize;
    for &check in &cfg.checks {
        let found = checks::run(&ctx, check)?;
        let failed = found.iter().filter(|r| r["pass"] != json!(true)).count();
        failed_total += failed;
        per_check.insert(check.as_str(), json!({"instances": found.len(), "failed": failed}));
        rows.extend(found);
    }
    let ok = failed_total == 0;
    let summary = json!({
        "instances": rows.len(),
        "failed": failed_total,
        "checks": per_check,
        "status": if ok { "pass" } else { "fail" },
    });
    Ok((Report { header: cfg.header("verify"), rows, summary }, ok))
}

fn execute(cli: &Cli) -> Result<(), Failure> {
    let cfg = build_config(cli)?;
    let (report, ok) = match &cli.command {
        Command::Classes => (cmd_classes(&cfg)?, true),
        Command::Product { lhs, rhs } => (cmd_product(&cfg, lhs, rhs)?, true),
        Command::Verify => cmd_verify(&cfg)?,
    };
    report::write(&report.render(cfg.format)?, cfg.out.as_deref())?;
    if ok {
        Ok(())
    } else {
        Err(Failure::Checks)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Checks) => ExitCode::from(1),
        Err(Failure::Config(msg)) => {
            eprintln!("hallforge: {msg}");
            ExitCode::from(2)
        }
    }
}
