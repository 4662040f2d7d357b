use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use stonecalc::harness::{parse_range, replay, run_suites, Fixture, Suite, SuiteConfig};
use stonecalc::lattice::Tolerance;
use stonecalc::mutation::Mutation;

#[derive(Parser)]
#[command(name = "stonecalc", about = "Seeded property suites for the Stone-space calculus")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run property suites and write a JSON report.
    Verify {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Atom counts, e.g. 1..16.
        #[arg(long, default_value = "1..16")]
        atoms: String,
        /// Filtration horizons, e.g. 1..8.
        #[arg(long, default_value = "1..8")]
        horizon: String,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        /// Comma separated: core, spectral, probability, stopping.
        #[arg(long, default_value = "core,spectral,probability,stopping")]
        suite: String,
        #[arg(long, default_value_t = Tolerance::default().relative)]
        rel_tol: f64,
        #[arg(long, default_value_t = Tolerance::default().absolute)]
        abs_tol: f64,
        /// Seeded fault: mu_endpoint_off_by_one, ce_dropped_weight, hitting_time_shift.
        #[arg(long)]
        mutation: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-run the trial recorded in a failure fixture.
    Replay {
        #[arg(long)]
        fixture: PathBuf,
    },
}

fn verify(cfg: SuiteConfig, out: Option<PathBuf>) -> Result<bool, String> {
    let report = run_suites(&cfg).map_err(|e| e.to_string())?;
    for r in &report.records {
        let status = if r.passed() { "PASS" } else { "FAIL" };
        eprintln!(
            "{status} {:<36} {}/{} failed, max slack {:.3e}",
            r.name, r.failures, r.trials, r.max_observed_slack
        );
        if let Some(f) = &r.first_failure_fixture {
            eprintln!("     first failure (trial {}): {}", f.trial, f.failure);
        }
    }
    for name in &report.missing {
        eprintln!("MISSING {name}");
    }
    let json = serde_json::to_string_pretty(&report).map_err(|e| e.to_string())?;
    match out {
        Some(path) => std::fs::write(&path, json).map_err(|e| format!("{}: {e}", path.display()))?,
        None => println!("{json}"),
    }
    Ok(report.pass)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Verify { seed, atoms, horizon, trials, suite, rel_tol, abs_tol, mutation, out } => (|| {
            let suites = suite
                .split(',')
                .filter(|s| !s.trim().is_empty())
                .map(|s| s.parse::<Suite>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| e.to_string())?;
            let mutation = mutation
                .map(|m| serde_json::from_value::<Mutation>(serde_json::Value::String(m)))
                .transpose()
                .map_err(|e| format!("unknown mutation: {e}"))?;
            let cfg = SuiteConfig {
                seed,
                atoms: parse_range(&atoms).map_err(|e| e.to_string())?,
                horizon: parse_range(&horizon).map_err(|e| e.to_string())?,
                trials,
                tolerance: Tolerance { relative: rel_tol, absolute: abs_tol },
                suites,
                mutation,
            };
            verify(cfg, out)
        })(),
        Command::Replay { fixture } => (|| {
            let text = std::fs::read_to_string(&fixture).map_err(|e| format!("{}: {e}", fixture.display()))?;
            // accept a bare fixture or a property record holding one
            let value: serde_json::Value = serde_json::from_str(&text).map_err(|e| e.to_string())?;
            let value = value.get("first_failure_fixture").cloned().unwrap_or(value);
            let fx: Fixture = serde_json::from_value(value).map_err(|e| e.to_string())?;
            let r = replay(&fx).map_err(|e| e.to_string())?;
            println!("{}", serde_json::to_string_pretty(&r).map_err(|e| e.to_string())?);
            if !r.instance_matches {
                eprintln!("instance differs from the fixture");
            }
            Ok(r.reproduced)
        })(),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
