//! Command-line harness: suite runner, pointwise computations on JSON
//! inputs, and shape export.
//!
//! Exit codes: 0 all pass, 1 theorem-check failure, 2 input error,
//! 3 resource cap exceeded.

use clap::{Parser, Subcommand, ValueEnum};
use derivator::error::Error;
use derivator::jsonio;
use derivator::suites::{run_all, run_suite, SuiteConfig, SUITES};
use derivator::{kan, shapes};
use serde_json::Value;
use std::path::PathBuf;

#[derive(Parser)]
#[command(name = "derivator", version, about = "A calculus of squares, cones and Kan extensions for diagrams of chain complexes over finite categories")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Json,
    Markdown,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite (or `all`).
    Run {
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        /// Repeatable; defaults to 2, 3 and 7.
        #[arg(long = "prime")]
        primes: Vec<u32>,
        /// Total dimension budget for each random input.
        #[arg(long, default_value_t = 18)]
        budget: usize,
        /// Resource cap on any single totalization.
        #[arg(long, default_value_t = kan::DEFAULT_CAP)]
        max_total_dim: usize,
        #[arg(long, value_enum, default_value = "json")]
        out: OutFormat,
        /// Directory for serialized failure witnesses.
        #[arg(long)]
        witness_dir: Option<PathBuf>,
        /// Write the report here instead of stdout.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Apply one operation to a JSON input file.
    Compute {
        #[arg(long)]
        op: String,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
        /// Window size for Barratt-Puppe computations.
        #[arg(long, default_value_t = 2)]
        window: u32,
        /// Degree shift for the shift operation.
        #[arg(long, default_value_t = 1)]
        k: i32,
    },
    /// Emit a catalogued shape as a category JSON file.
    Shape {
        #[arg(long)]
        name: String,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

fn emit(value: &Value, output: Option<&PathBuf>) -> derivator::Result<()> {
    let text = jsonio::to_canonical_string(value);
    match output {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{}", text),
    }
    Ok(())
}

fn compute(op: &str, input: &PathBuf, output: Option<&PathBuf>, window: u32, k: i32) -> derivator::Result<()> {
    let text = std::fs::read_to_string(input)?;
    let v: Value = serde_json::from_str(&text)?;
    let result = derivator::ops::compute_value(op, &v, input.parent(), window, k)?;
    emit(&result, output)
}

fn main() {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e);
            e.exit_code()
        }
    };
    std::process::exit(code);
}

fn run(cli: Cli) -> derivator::Result<i32> {
    match cli.command {
        Command::Run { suite, seed, trials, primes, budget, max_total_dim, out, witness_dir, report } => {
            let cfg = SuiteConfig {
                seed,
                trials,
                primes: if primes.is_empty() { vec![2, 3, 7] } else { primes },
                cap: max_total_dim,
                budget,
                witness_dir,
            };
            let reports = if suite == "all" {
                run_all(&cfg)?
            } else {
                if !SUITES.contains(&suite.as_str()) {
                    return Err(Error::UnknownSuite(suite));
                }
                vec![run_suite(&suite, &cfg)?]
            };
            let all_pass = reports.iter().all(|r| r.passed);
            let text = match out {
                OutFormat::Json => {
                    if reports.len() == 1 {
                        reports[0].to_json_string()
                    } else {
                        let vals: Vec<Value> = reports
                            .iter()
                            .map(serde_json::to_value)
                            .collect::<std::result::Result<_, _>>()?;
                        jsonio::to_canonical_string(&Value::Array(vals))
                    }
                }
                OutFormat::Markdown => reports.iter().map(|r| r.to_markdown()).collect::<Vec<_>>().join("\n"),
            };
            match &report {
                Some(path) => std::fs::write(path, &text)?,
                None => print!("{}", text),
            }
            for r in &reports {
                eprintln!(
                    "suite {}: {} ({} ms)",
                    r.suite,
                    if r.passed { "pass" } else { "FAIL" },
                    r.wall_ms
                );
            }
            Ok(if all_pass { 0 } else { 1 })
        }
        Command::Compute { op, input, output, window, k } => {
            compute(&op, &input, output.as_ref(), window, k)?;
            Ok(0)
        }
        Command::Shape { name, output } => {
            let c = shapes::standard_shape(&name)?;
            emit(&jsonio::category_to_json(&c), output.as_ref())?;
            Ok(0)
        }
    }
}
