//! `lgsim`: evaluate, sweep, sample, and check the three-measurement
//! protocol from the command line.
//!
//! Exit codes: 0 success, 1 usage or configuration error, 2 invariant-suite
//! failure, 3 I/O error.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use lgsim_core::{evaluate_point, run_protocol};
use lgsim_cli::check::run_acceptance;
use lgsim_cli::config::parse_config;
use lgsim_cli::output::{fmt_sig, write_results, OutputError};
use lgsim_cli::sample::{sample_outcomes, RNG_ALGORITHM};
use lgsim_cli::sweep::run_sweep;

const EXIT_USAGE: u8 = 1;
const EXIT_INVARIANT: u8 = 2;
const EXIT_IO: u8 = 3;

#[derive(Parser)]
#[command(
    name = "lgsim",
    version,
    about = "Three consecutive measurements on a maximally mixed qubit: \
             correlators, detector entropies, and Leggett-Garg inequality families"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one (theta1, theta2, epsilon) point and print the full report
    Point {
        /// Second measurement angle relative to the first basis
        #[arg(long)]
        theta1: f64,
        /// Third measurement angle relative to the second basis
        #[arg(long)]
        theta2: f64,
        /// Middle measurement strength in [0, 1]
        #[arg(long, default_value_t = 1.0)]
        epsilon: f64,
        /// Interpret the angles as degrees instead of radians
        #[arg(long)]
        degrees: bool,
    },
    /// Run a configured parameter sweep and persist CSV or JSON
    Sweep {
        /// Path to a key = value configuration file
        #[arg(long)]
        config: PathBuf,
    },
    /// Draw seeded Monte Carlo outcomes at one parameter point
    Sample {
        #[arg(long)]
        theta1: f64,
        #[arg(long)]
        theta2: f64,
        #[arg(long, default_value_t = 1.0)]
        epsilon: f64,
        /// Number of draws
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Interpret the angles as degrees instead of radians
        #[arg(long)]
        degrees: bool,
    },
    /// Run the full invariant suite; exits nonzero on any failure
    Check,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => EXIT_USAGE,
            };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match cli.command {
        Command::Point {
            theta1,
            theta2,
            epsilon,
            degrees,
        } => cmd_point(convert(theta1, degrees), convert(theta2, degrees), epsilon),
        Command::Sweep { config } => cmd_sweep(&config),
        Command::Sample {
            theta1,
            theta2,
            epsilon,
            n,
            seed,
            degrees,
        } => cmd_sample(
            convert(theta1, degrees),
            convert(theta2, degrees),
            epsilon,
            n,
            seed,
        ),
        Command::Check => cmd_check(),
    }
}

fn convert(angle: f64, degrees: bool) -> f64 {
    if degrees {
        angle.to_radians()
    } else {
        angle
    }
}

fn cmd_point(theta1: f64, theta2: f64, epsilon: f64) -> ExitCode {
    let report = match evaluate_point(theta1, theta2, epsilon) {
        Ok(report) => report,
        Err(err) => {
            eprintln!("error: {err}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    println!(
        "point: theta1 = {}, theta2 = {}, epsilon = {}",
        fmt_sig(report.theta1),
        fmt_sig(report.theta2),
        fmt_sig(report.epsilon)
    );
    println!(
        "correlators: K12 = {}  K23 = {}  K13 = {}",
        fmt_sig(report.k12),
        fmt_sig(report.k23),
        fmt_sig(report.k13)
    );
    println!(
        "entropies:   S12 = {}  S23 = {}  S13 = {}  S2 = {}  S123 = {}",
        fmt_sig(report.s12),
        fmt_sig(report.s23),
        fmt_sig(report.s13),
        fmt_sig(report.s2),
        fmt_sig(report.s123)
    );
    println!(
        "standard:    B1 = {}  B2 = {}  B3 = {}  (each <= 1)  B4 = {}  (>= 0)",
        fmt_sig(report.b1),
        fmt_sig(report.b2),
        fmt_sig(report.b3),
        fmt_sig(report.b4)
    );
    println!(
        "entropic:    B1* = {}  B2* = {}  B3* = {}  (each >= 1 at full strength)",
        fmt_sig(report.b1s),
        fmt_sig(report.b2s),
        fmt_sig(report.b3s)
    );
    println!("weak:        B1' = {}  (>= 0 at any strength)", fmt_sig(report.b1p));
    println!(
        "no-middle:   naive_S13 = {}  naive_K13 = {}",
        fmt_sig(report.naive_s13),
        fmt_sig(report.naive_k13)
    );
    let venn = &report.venn;
    let [a, b, c] = venn.labels();
    println!("venn ({a}, {b}, {c}):");
    println!(
        "  solo:        {a} = {}  {b} = {}  {c} = {}",
        fmt_sig(venn.solo(0)),
        fmt_sig(venn.solo(1)),
        fmt_sig(venn.solo(2))
    );
    println!(
        "  cond mutual: ({a}:{b}) = {}  ({a}:{c}) = {}  ({b}:{c}) = {}",
        fmt_sig(venn.cond_mutual(0, 1)),
        fmt_sig(venn.cond_mutual(0, 2)),
        fmt_sig(venn.cond_mutual(1, 2))
    );
    println!("  center:      {}", fmt_sig(venn.center()));
    println!(
        "oracle deviation: {:.3e} ({})",
        report.oracle_dev,
        if report.oracle_consistent() {
            "consistent"
        } else {
            "INTERNAL CONSISTENCY ERROR"
        }
    );
    if report.oracle_consistent() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_INVARIANT)
    }
}

fn cmd_sweep(config_path: &PathBuf) -> ExitCode {
    let text = match fs::read_to_string(config_path) {
        Ok(text) => text,
        Err(err) => {
            eprintln!("error: cannot read `{}`: {err}", config_path.display());
            return ExitCode::from(EXIT_IO);
        }
    };
    let cfg = match parse_config(&text) {
        Ok(cfg) => cfg,
        Err(err) => {
            eprintln!("error: {err}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    let outcome = match run_sweep(&cfg) {
        Ok(outcome) => outcome,
        Err(err) => {
            eprintln!("error: {err}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    if let Err(err) = write_results(&outcome, &cfg) {
        eprintln!("error: {err}");
        let code = match err {
            OutputError::Io { .. } => EXIT_IO,
            OutputError::Encode(_) => EXIT_IO,
        };
        return ExitCode::from(code);
    }
    let s = &outcome.summary;
    println!(
        "wrote {} rows to {}",
        s.rows,
        cfg.output_path.display()
    );
    println!(
        "summary: min(B1*) = {}  min(B1') = {}  max(B1) = {}",
        fmt_sig(s.min_b1s),
        fmt_sig(s.min_b1p),
        fmt_sig(s.max_b1)
    );
    println!(
        "naive apparent violations: {} rows ({} entropic, {} standard)",
        s.naive_violations, s.naive_entropic_violations, s.naive_standard_violations
    );
    ExitCode::SUCCESS
}

fn cmd_sample(theta1: f64, theta2: f64, epsilon: f64, n: u64, seed: u64) -> ExitCode {
    let rho123 = match run_protocol(theta1, theta2, epsilon) {
        Ok(result) => result.rho123,
        Err(err) => {
            eprintln!("error: {err}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    let est = match sample_outcomes(&rho123, n, seed) {
        Ok(est) => est,
        Err(err) => {
            eprintln!("error: {err}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    println!("# rng: {RNG_ALGORITHM}, seed: {seed}, n: {n}");
    println!(
        "point: theta1 = {}, theta2 = {}, epsilon = {}",
        fmt_sig(theta1),
        fmt_sig(theta2),
        fmt_sig(epsilon)
    );
    println!("outcome counts (A1 A2 A3):");
    for (idx, count) in est.counts.iter().enumerate() {
        println!("  |{idx:03b}>  {count}");
    }
    let labels = ["K12", "K23", "K13"];
    for ((label, k), err) in labels.iter().zip(est.k_hat).zip(est.stderr) {
        println!("{label}_hat = {} +- {}", fmt_sig(k), fmt_sig(err));
    }
    println!(
        "plug-in entropies: S12 = {}  S23 = {}  S13 = {}  S123 = {}",
        fmt_sig(est.shannon_pairs[0]),
        fmt_sig(est.shannon_pairs[1]),
        fmt_sig(est.shannon_pairs[2]),
        fmt_sig(est.shannon_triple)
    );
    ExitCode::SUCCESS
}

fn cmd_check() -> ExitCode {
    let outcomes = run_acceptance();
    let mut all_pass = true;
    for outcome in &outcomes {
        println!("{}", outcome.line());
        all_pass &= outcome.pass;
    }
    if all_pass {
        println!("all {} checks passed", outcomes.len());
        ExitCode::SUCCESS
    } else {
        let failed = outcomes.iter().filter(|o| !o.pass).count();
        eprintln!("{failed} check(s) failed");
        ExitCode::from(EXIT_INVARIANT)
    }
}
