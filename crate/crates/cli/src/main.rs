use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use holotrans_cli::{catalog, explain, output, parse_scenario, run_scenario};

const BUILTIN: &str = "builtin:";

#[derive(Parser, Debug)]
#[command(name = "holotrans", version, about = "Entropy bounds, parabolicity and Brownian motion on model manifolds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a scenario file, or `builtin:<name>` for a catalog entry
    Run {
        scenario: String,
        /// Write the result bundle here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
        /// Override the scenario seed
        #[arg(long)]
        seed: Option<u64>,
        /// Write CSV tables into this directory
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// List built-in scenarios
    Catalog {
        /// Print the JSON source of one entry
        #[arg(long)]
        show: Option<String>,
    },
    /// Describe an analysis: hypotheses and how to read its result
    Explain { analysis: String },
}

fn run(scenario: &str, out: Option<PathBuf>, seed: Option<u64>, csv: Option<PathBuf>) -> Result<ExitCode> {
    let src = match scenario.strip_prefix(BUILTIN) {
        Some(name) => catalog::source(name)?.to_string(),
        None => fs::read_to_string(scenario).with_context(|| format!("reading {scenario}"))?,
    };
    let parsed = parse_scenario(&src).with_context(|| format!("loading {scenario}"))?;
    let result = run_scenario(&parsed, seed).with_context(|| format!("running {scenario}"))?;
    let json = output::to_json(&result.bundle)?;
    match out {
        Some(path) => fs::write(&path, json).with_context(|| format!("writing {}", path.display()))?,
        None => print!("{json}"),
    }
    if let Some(dir) = csv {
        result.write_csv(&dir).with_context(|| format!("writing CSV to {}", dir.display()))?;
    }
    for r in &result.bundle.results {
        if let holotrans_cli::run::Outcome::Error(e) = &r.outcome {
            eprintln!("{}: {} error: {}", r.analysis, e.kind, e.message);
        }
    }
    Ok(if result.bundle.has_errors() {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    })
}

fn main() -> Result<ExitCode> {
    let cli = Cli::parse();
    match cli.command {
        Command::Run { scenario, out, seed, csv } => run(&scenario, out, seed, csv),
        Command::Catalog { show: Some(name) } => {
            print!("{}", catalog::source(&name)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Catalog { show: None } => {
            for e in catalog::catalog() {
                println!("{:<30} {}", e.name, e.description);
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Explain { analysis } => {
            println!("{}", explain::explain(&analysis)?);
            Ok(ExitCode::SUCCESS)
        }
    }
}
