use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use tse_core::scenario::{golden, goldens, run_checks, run_scenario, write_artifacts, Scenario};
use tse_core::Error;

/// Exit status when `--check` assertions fail.
const CHECK_FAILED: u8 = 4;

#[derive(Parser)]
#[command(name = "tse", about = "Strategic-evolution scenario runner", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario file (or the name of a bundled golden scenario).
    Run {
        file: String,
        /// Evaluate the scenario's embedded [[check]] assertions.
        #[arg(long)]
        check: bool,
        /// Artifact directory (overrides the scenario's `output`).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Override the scenario seed.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// List the bundled golden scenarios.
    Goldens,
    /// Print the version and scenario format version.
    Version,
}

fn load(file: &str) -> Result<(Scenario, String), Error> {
    let path = Path::new(file);
    if !path.exists() {
        if let Some(g) = golden(file) {
            return Ok((Scenario::parse(g.source)?, g.name.to_string()));
        }
    }
    let stem = path.file_stem().map_or("scenario".into(), |s| s.to_string_lossy().into_owned());
    Ok((Scenario::load(path)?, stem))
}

fn run(file: &str, check: bool, out: Option<PathBuf>, seed: Option<u64>) -> Result<bool, Error> {
    let (scenario, stem) = load(file)?;
    let report = run_scenario(&scenario, seed)?;
    let dir = out
        .or_else(|| scenario.output.clone())
        .unwrap_or_else(|| PathBuf::from("tse-out").join(scenario.name.clone().unwrap_or(stem)));
    write_artifacts(&report, &dir)?;
    println!("{}", report.summary);
    if !check {
        return Ok(true);
    }
    let results = run_checks(&scenario, &report);
    for r in &results {
        println!("{} {}: {}", if r.passed { "PASS" } else { "FAIL" }, r.key, r.detail);
    }
    Ok(results.iter().all(|r| r.passed))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Version => {
            println!("tse {} (scenario format {})", env!("CARGO_PKG_VERSION"), tse_core::scenario::FORMAT_VERSION);
            ExitCode::SUCCESS
        }
        Command::Goldens => {
            for g in goldens() {
                println!("{:<22} {:<58} {}", g.name, g.example, g.asserts);
            }
            ExitCode::SUCCESS
        }
        Command::Run { file, check, out, seed } => match run(&file, check, out, seed) {
            Ok(true) => ExitCode::SUCCESS,
            Ok(false) => ExitCode::from(CHECK_FAILED),
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(e.exit_code() as u8)
            }
        },
    }
}
