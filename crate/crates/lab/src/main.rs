use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::{fs, thread};

use clap::{Parser, Subcommand};
use dixlab::experiments::{self, catalog, Experiment};
use dixlab::report::ExperimentReport;
use dixlab::Error;

#[derive(Parser)]
#[command(name = "dixlab", version, about = "Run singular-trace experiments and the acceptance suite")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment and write report.json and its artifacts.
    Run {
        name: String,
        /// Config file of `key = value` lines.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Output directory (default: runs/<name>).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Parameter override, repeatable.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        set: Vec<String>,
    },
    /// List experiments with their module, anchor and default parameters.
    List,
    /// Run every registered experiment with defaults.
    VerifyAll {
        /// Run experiments on separate threads.
        #[arg(long)]
        parallel: bool,
        #[arg(long, default_value = "runs")]
        out: PathBuf,
    },
}

const EXIT_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Run { name, config, out, set } => run(&name, config.as_deref(), out, &set),
        Command::List => {
            list();
            ExitCode::SUCCESS
        }
        Command::VerifyAll { parallel, out } => verify_all(parallel, &out),
    }
}

fn failure(e: &Error) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(if e.is_usage() { EXIT_USAGE } else { EXIT_FAILED })
}

fn run(name: &str, config: Option<&Path>, out: Option<PathBuf>, set: &[String]) -> ExitCode {
    let text = match config.map(fs::read_to_string).transpose() {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {}: {e}", config.unwrap_or(Path::new("")).display());
            return ExitCode::from(EXIT_USAGE);
        }
    };
    let out = out.unwrap_or_else(|| Path::new("runs").join(name));
    let cfg = match experiments::configure(name, text.as_deref(), set, &out) {
        Ok(c) => c,
        Err(e) => return failure(&e),
    };
    match experiments::run(&cfg) {
        Ok(report) => {
            print_report(&report);
            println!("report: {}", out.join("report.json").display());
            if report.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_FAILED)
            }
        }
        Err(e) => failure(&e),
    }
}

fn print_report(r: &ExperimentReport) {
    for a in &r.assertions {
        let mark = if a.relation == "measured" { "  info" } else if a.passed { "  ok  " } else { "  FAIL" };
        let expected = if a.relation == "measured" { String::new() } else { format!(" {} {}", a.relation, a.expected) };
        let tol = a.tolerance.map(|t| format!(" (tol {t:e})")).unwrap_or_default();
        println!("{mark} {}: {}{expected}{tol}", a.name, a.measured);
    }
    if let Some(e) = &r.error {
        println!("  error: {e}");
    }
    println!("{} {} ({:.2} s)", if r.passed { "PASS" } else { "FAIL" }, r.experiment, r.wall_clock_seconds);
}

fn list() {
    for e in catalog() {
        let criterion = e.criterion.map(|c| format!(" [criterion {c}]")).unwrap_or_default();
        println!("{}{criterion}\n  module: {}\n  anchor: {}\n  {}", e.name, e.module, e.anchor, e.summary);
        for p in e.params {
            println!("    {} = {}    # {}", p.key, p.default, p.help);
        }
    }
}

fn run_one(e: &Experiment, root: &Path) -> (String, Result<ExperimentReport, Error>) {
    (e.name.to_string(), experiments::run_default(e.name, &root.join(e.name)))
}

fn verify_all(parallel: bool, root: &Path) -> ExitCode {
    let results: Vec<_> = if parallel {
        thread::scope(|s| {
            let handles: Vec<_> = catalog().iter().map(|e| s.spawn(move || run_one(e, root))).collect();
            handles.into_iter().map(|h| h.join().expect("experiment thread")).collect()
        })
    } else {
        catalog().iter().map(|e| run_one(e, root)).collect()
    };
    let mut all_passed = true;
    for ((name, result), e) in results.iter().zip(catalog()) {
        let label = e.criterion.map(|c| format!("criterion {c}: ")).unwrap_or_default();
        match result {
            Ok(r) => {
                println!("{} {label}{name} ({:.2} s)", if r.passed { "PASS" } else { "FAIL" }, r.wall_clock_seconds);
                for a in r.failures() {
                    println!("    {}: {} {} {}", a.name, a.measured, a.relation, a.expected);
                }
                if let Some(err) = &r.error {
                    println!("    error: {err}");
                }
                all_passed &= r.passed;
            }
            Err(err) => {
                println!("FAIL {label}{name}: {err}");
                all_passed = false;
            }
        }
    }
    if all_passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_FAILED)
    }
}
