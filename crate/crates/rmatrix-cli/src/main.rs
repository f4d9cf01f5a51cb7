mod commands;
mod config;
mod markdown;

use clap::{Args, Parser, Subcommand};
use rmatrix_core::oracle::DEFAULT_MAX_GROUP_ORDER;
use rmatrix_core::root_systems::Family;
use serde::Serialize;
use std::process::ExitCode;

use commands::Status;
use config::{Format, LatticeSelector, RunConfig};

/// Classify Cartan-part R-matrices of small quantum groups.
#[derive(Parser)]
#[command(name = "rmatrix", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify every candidate (Λ, Λ1, Λ2, g) and report its verdicts.
    Classify {
        #[command(flatten)]
        common: Common,
        /// Also run the brute-force oracle on each candidate.
        #[arg(long)]
        oracle: bool,
        #[command(flatten)]
        bounds: Bounds,
    },
    /// Render the stratified solution table and compare it with the closed-form rows.
    Table {
        #[command(flatten)]
        common: Common,
    },
    /// Cross-check the classifier against the brute-force oracle.
    Verify {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        bounds: Bounds,
    },
}

#[derive(Args)]
struct Common {
    /// Lie family; all families when omitted.
    #[arg(long, value_parser = parse_family)]
    family: Option<Family>,
    /// Rank; every rank up to 4 (and all exceptional types) when omitted.
    #[arg(long)]
    rank: Option<usize>,
    #[arg(long, conflicts_with = "ell_range")]
    ell: Option<u64>,
    /// Inclusive range `A..B`.
    #[arg(long)]
    ell_range: Option<String>,
    /// root, weight, all, or subgroup:<c1,..,cn>[;<...>] in the fundamental-weight basis.
    #[arg(long, default_value = "all", value_parser = parse_selector)]
    lattice: LatticeSelector,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args)]
struct Bounds {
    /// Largest |Λ/Λ'| handed to the oracle.
    #[arg(long, default_value_t = DEFAULT_MAX_GROUP_ORDER)]
    max_group_order: u64,
    /// Exit with status 3 when a candidate exceeds the bound.
    #[arg(long)]
    strict: bool,
}

fn parse_family(s: &str) -> Result<Family, String> {
    s.parse().map_err(|e| format!("{e}"))
}

fn parse_selector(s: &str) -> Result<LatticeSelector, String> {
    s.parse().map_err(|e: anyhow::Error| e.to_string())
}

fn build_config(common: &Common, oracle: bool, bounds: Option<&Bounds>) -> anyhow::Result<RunConfig> {
    Ok(RunConfig {
        types: RunConfig::types_for(common.family, common.rank)?,
        ells: RunConfig::ells_for(common.ell, common.ell_range.as_deref())?,
        lattice: common.lattice.clone(),
        format: common.format,
        oracle,
        max_group_order: bounds.map_or(DEFAULT_MAX_GROUP_ORDER, |b| b.max_group_order),
        strict: bounds.is_some_and(|b| b.strict),
    })
}

fn emit<T: Serialize>(format: Format, value: &T, md: impl Fn(&T) -> String) -> anyhow::Result<()> {
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(value)?),
        Format::Md => print!("{}", md(value)),
    }
    Ok(())
}

fn run(cli: Cli) -> anyhow::Result<Status> {
    match cli.command {
        Command::Classify { common, oracle, bounds } => {
            let cfg = build_config(&common, oracle, Some(&bounds))?;
            let (out, status) = commands::classify(&cfg)?;
            emit(cfg.format, &out, markdown::classify)?;
            Ok(status)
        }
        Command::Table { common } => {
            let cfg = build_config(&common, false, None)?;
            let (out, status) = commands::table(&cfg)?;
            emit(cfg.format, &out, markdown::table)?;
            Ok(status)
        }
        Command::Verify { common, bounds } => {
            let cfg = build_config(&common, true, Some(&bounds))?;
            let (out, status) = commands::verify(&cfg)?;
            emit(cfg.format, &out, markdown::verify)?;
            Ok(status)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(status) => ExitCode::from(status.exit_code() as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
