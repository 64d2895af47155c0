use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use padic_opalg::suite::{all_passed, run_suite, RunConfig, Status, Suite};

/// Run exact p-adic operator-algebra check suites and write a JSON report.
#[derive(Parser, Debug)]
#[command(name = "opalg", version)]
struct Args {
    #[arg(long, default_value_t = 5)]
    p: u64,
    #[arg(long, default_value_t = 2)]
    l: u64,
    #[arg(long, default_value_t = 2)]
    k: u32,
    /// Defaults to k (free action).
    #[arg(long)]
    j: Option<u32>,
    /// Relative precision N of capped p-adic values.
    #[arg(long, default_value_t = 64)]
    precision: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Suite::All)]
    suite: Suite,
    /// Ambient-dimension cap for commutant solves.
    #[arg(long, default_value_t = 4096)]
    budget: usize,
    #[arg(long, default_value_t = 20)]
    samples: usize,
    #[arg(long, default_value_t = 5)]
    degree_bound: usize,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// JSON file with optional "matrix", "function" and "algebra" entries.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Record wall time per check (makes reports non-reproducible).
    #[arg(long)]
    timing: bool,
}

fn run(args: Args) -> Result<bool, Box<dyn std::error::Error>> {
    let input = match &args.input {
        Some(path) => Some(serde_json::from_str(&std::fs::read_to_string(path)?)?),
        None => None,
    };
    let config = RunConfig {
        p: args.p,
        l: args.l,
        k: args.k,
        j: args.j.unwrap_or(args.k),
        precision: args.precision,
        seed: args.seed,
        degree_bound: args.degree_bound,
        samples: args.samples,
        budget: args.budget,
        input,
        timing: args.timing,
        ..RunConfig::default()
    };
    let reports = run_suite(&config, args.suite)?;
    let text = serde_json::to_string_pretty(&reports)? + "\n";
    match &args.out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    for r in &reports {
        let tag = match r.status {
            Status::Pass => "pass",
            Status::Fail => "FAIL",
            Status::Error => "ERROR",
        };
        eprintln!("{tag:5} {}", r.id);
    }
    Ok(all_passed(&reports))
}

fn main() -> ExitCode {
    match run(Args::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
