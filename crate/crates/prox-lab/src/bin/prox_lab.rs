//! Command-line front end: run scenario configs, list the catalogs, and run
//! frame decompositions from CSV vector files.
//!
//! Exit codes: 0 all suites pass, 1 residual failure, 2 configuration or
//! usage error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use prox_lab::error::ProxError;
use prox_lab::frames::build_frame;
use prox_lab::report::{
    list_catalog, load_frame_csv, run_config_file, write_residual_csv, RunOptions, RunReport,
};

#[derive(Parser)]
#[command(name = "prox-lab", version, about = "generalized proximity decomposition lab")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonOpts {
    /// Override every scenario's sampling seed
    #[arg(long)]
    seed: Option<u64>,
    /// Tolerance override as key=value (value_tol, vector_tol, fd_step, gap_tol)
    #[arg(long = "tol-override", value_name = "KEY=VALUE")]
    tol_override: Vec<String>,
    /// Write the JSON report to this path (default: stdout)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write a per-point residual table (CSV) to this path
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Execute the suites requested by a JSON config
    Run {
        config: PathBuf,
        #[command(flatten)]
        opts: CommonOpts,
    },
    /// List geometries, phi entries, and certified pairings
    Catalog,
    /// Run frame decompositions with vectors loaded from CSV
    Frame {
        csv_vectors: PathBuf,
        config: PathBuf,
        #[command(flatten)]
        opts: CommonOpts,
    },
}

fn parse_tol_overrides(raw: &[String]) -> Result<Vec<(String, f64)>, String> {
    raw.iter()
        .map(|item| {
            let (key, value) = item
                .split_once('=')
                .ok_or_else(|| format!("expected KEY=VALUE, got \"{item}\""))?;
            let v: f64 = value
                .parse()
                .map_err(|_| format!("bad tolerance value \"{value}\""))?;
            Ok((key.to_string(), v))
        })
        .collect()
}

fn emit(report: &RunReport, opts: &CommonOpts) -> Result<(), ProxError> {
    let json = serde_json::to_string_pretty(report)?;
    match &opts.out {
        Some(path) => std::fs::write(path, json)?,
        None => println!("{json}"),
    }
    if let Some(path) = &opts.csv {
        write_residual_csv(report, path)?;
    }
    Ok(())
}

fn exit_for(err: &ProxError) -> ExitCode {
    match err {
        ProxError::Config(_) | ProxError::Io(_) | ProxError::Json(_) | ProxError::NotAFrame => {
            ExitCode::from(2)
        }
        _ => ExitCode::from(1),
    }
}

fn execute(config: &PathBuf, opts: &CommonOpts, run_opts: RunOptions) -> ExitCode {
    let report = match run_config_file(config, &run_opts) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_for(&e);
        }
    };
    if let Err(e) = emit(&report, opts) {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    if report.report.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run { config, opts } => {
            let tols = match parse_tol_overrides(&opts.tol_override) {
                Ok(t) => t,
                Err(msg) => {
                    eprintln!("error: {msg}");
                    return ExitCode::from(2);
                }
            };
            let run_opts = RunOptions {
                seed_override: opts.seed,
                tol_overrides: tols,
                frame: None,
            };
            execute(&config, &opts, run_opts)
        }
        Command::Catalog => {
            println!(
                "{}",
                serde_json::to_string_pretty(&list_catalog()).expect("valid JSON")
            );
            ExitCode::SUCCESS
        }
        Command::Frame {
            csv_vectors,
            config,
            opts,
        } => {
            let tols = match parse_tol_overrides(&opts.tol_override) {
                Ok(t) => t,
                Err(msg) => {
                    eprintln!("error: {msg}");
                    return ExitCode::from(2);
                }
            };
            let frame = match load_frame_csv(&csv_vectors).and_then(|v| build_frame(&v)) {
                Ok(f) => f,
                Err(e) => {
                    eprintln!("error: {e}");
                    return exit_for(&e);
                }
            };
            let run_opts = RunOptions {
                seed_override: opts.seed,
                tol_overrides: tols,
                frame: Some(frame),
            };
            execute(&config, &opts, run_opts)
        }
    }
}
