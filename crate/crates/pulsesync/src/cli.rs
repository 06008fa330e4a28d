//! Command-line front end: `run`, `compare`, and `sweep` over JSON configs.
//!
//! Exit codes: 0 success, 2 missing/invalid config or parameters, 3 I/O
//! failure while writing results.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand};

use crate::engine::ExperimentConfig;
use crate::error::Error;
use crate::io::{self, RunManifest, SweepRow};
use crate::metrics::{compare_methods, MethodComparison, Summary};

pub const EXIT_OK: u8 = 0;
pub const EXIT_CONFIG: u8 = 2;
pub const EXIT_IO: u8 = 3;

#[derive(Parser)]
#[command(
    name = "pulsesync",
    version,
    about = "Simulate decentralized phase synchronization and desynchronization \
             over a slotted broadcast network"
)]
struct Cli {
    /// Suppress informational output (errors still go to stderr).
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Execute one experiment; write agent traces, metric series, summary
    /// and manifest into the output directory.
    Run(RunArgs),
    /// Run the three actuation methods over a batch of seeds and tabulate
    /// the comparison.
    Compare(CompareArgs),
    /// Re-run one config across a list of coupling gains at a fixed seed.
    Sweep(SweepArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Experiment config JSON file.
    #[arg(long)]
    config: PathBuf,
    /// Output directory (created if missing).
    #[arg(long)]
    out: PathBuf,
    /// Override the config's seed.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct CompareArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// How many consecutive seeds to run, starting at the resolved seed.
    #[arg(long)]
    n_seeds: u64,
    /// Override the config's seed (the batch starts here).
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Comma-separated coupling gains, each in (0, 1], no duplicates.
    #[arg(long, value_delimiter = ',', required = true)]
    gains: Vec<f64>,
    /// Override the config's seed.
    #[arg(long)]
    seed: Option<u64>,
}

/// A command failure carrying the exit code it maps to.
struct Failure {
    code: u8,
    error: Error,
}

/// Anything wrong with inputs before execution starts.
fn config_err(error: Error) -> Failure {
    Failure {
        code: EXIT_CONFIG,
        error,
    }
}

/// Failures after inputs were accepted: I/O is 3, the rest config-shaped.
fn output_err(error: Error) -> Failure {
    let code = match error {
        Error::Io { .. } => EXIT_IO,
        _ => EXIT_CONFIG,
    };
    Failure { code, error }
}

/// Parse arguments from the process environment and dispatch. The returned
/// code is ready to hand back to the OS.
pub fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Run(args) => cmd_run(args, cli.quiet),
        Command::Compare(args) => cmd_compare(args, cli.quiet),
        Command::Sweep(args) => cmd_sweep(args, cli.quiet),
    };
    match result {
        Ok(()) => ExitCode::from(EXIT_OK),
        Err(failure) => {
            eprintln!("error: {}", failure.error);
            ExitCode::from(failure.code)
        }
    }
}

fn cmd_run(args: &RunArgs, quiet: bool) -> Result<(), Failure> {
    let started = unix_now();
    let config = load_config(&args.config, args.seed)?;
    let (trace, summary) = crate::engine::run(&config).map_err(config_err)?;
    let files = io::write_run_outputs(&args.out, &trace, &summary).map_err(output_err)?;
    write_manifest(&args.out, &args.config, config.seed, started, files).map_err(output_err)?;
    if !quiet {
        println!("run: {} -> {}", args.config.display(), args.out.display());
        print_summary(&summary);
    }
    Ok(())
}

fn cmd_compare(args: &CompareArgs, quiet: bool) -> Result<(), Failure> {
    let started = unix_now();
    if args.n_seeds == 0 {
        return Err(config_err(Error::InvalidInput(
            "--n-seeds must be at least 1".into(),
        )));
    }
    let config = load_config(&args.config, args.seed)?;
    let seeds: Vec<u64> = (0..args.n_seeds)
        .map(|i| config.seed.wrapping_add(i))
        .collect();
    let comparison = compare_methods(&config, &seeds).map_err(config_err)?;

    std::fs::create_dir_all(&args.out).map_err(|e| output_err(Error::io(&args.out, e)))?;
    io::write_comparison(&args.out.join("comparison.json"), &comparison).map_err(output_err)?;
    let files = vec!["comparison.json".to_string()];
    write_manifest(&args.out, &args.config, config.seed, started, files).map_err(output_err)?;
    if !quiet {
        println!(
            "compare: {} seeds {}..={} -> {}",
            args.config.display(),
            seeds[0],
            seeds[seeds.len() - 1],
            args.out.display()
        );
        print_comparison(&comparison);
    }
    Ok(())
}

fn cmd_sweep(args: &SweepArgs, quiet: bool) -> Result<(), Failure> {
    let started = unix_now();
    validate_gains(&args.gains).map_err(config_err)?;
    let config = load_config(&args.config, args.seed)?;

    let mut rows = Vec::with_capacity(args.gains.len());
    for &gain in &args.gains {
        let mut c = config.clone();
        c.coupling.gain = gain;
        let (_, summary) = crate::engine::run(&c).map_err(config_err)?;
        rows.push(SweepRow {
            gain,
            convergence_time: summary.convergence_time,
            rounds_to_converge: summary.rounds_to_converge,
            steady_state_amplitude: summary.steady_state_amplitude,
            final_metric: summary.final_metric,
            truncated: summary.truncated,
        });
    }

    std::fs::create_dir_all(&args.out).map_err(|e| output_err(Error::io(&args.out, e)))?;
    io::write_sweep_csv(&args.out.join("sweep.csv"), &rows).map_err(output_err)?;
    let files = vec!["sweep.csv".to_string()];
    write_manifest(&args.out, &args.config, config.seed, started, files).map_err(output_err)?;
    if !quiet {
        println!("sweep: {} -> {}", args.config.display(), args.out.display());
        for r in &rows {
            let ct = r
                .convergence_time
                .map(|v| format!("{v:.2} s"))
                .unwrap_or_else(|| "none".into());
            println!(
                "  gain {:>5}: convergence {ct}, amplitude {:.6} rad",
                r.gain, r.steady_state_amplitude
            );
        }
    }
    Ok(())
}

/// Gains must be usable coupling coefficients and must not repeat (a
/// duplicated gain is almost certainly a typo in the list).
fn validate_gains(gains: &[f64]) -> crate::error::Result<()> {
    if gains.is_empty() {
        return Err(Error::InvalidInput("gain list must be nonempty".into()));
    }
    for &g in gains {
        if !g.is_finite() || g <= 0.0 || g > 1.0 {
            return Err(Error::invalid_config(
                "gains",
                format!("every gain must lie in (0, 1], got {g}"),
            ));
        }
    }
    for (i, &g) in gains.iter().enumerate() {
        if gains[..i].contains(&g) {
            return Err(Error::invalid_config(
                "gains",
                format!("duplicate gain {g}"),
            ));
        }
    }
    Ok(())
}

fn load_config(path: &Path, seed_override: Option<u64>) -> Result<ExperimentConfig, Failure> {
    let mut config = io::read_config(path).map_err(config_err)?;
    if let Some(seed) = seed_override {
        config.seed = seed;
    }
    Ok(config)
}

fn write_manifest(
    out: &Path,
    config_path: &Path,
    resolved_seed: u64,
    started_at_unix: f64,
    files: Vec<String>,
) -> crate::error::Result<()> {
    io::write_manifest(
        out,
        &RunManifest {
            config_path: config_path.display().to_string(),
            output_dir: out.display().to_string(),
            resolved_seed,
            artifact_version: env!("CARGO_PKG_VERSION").to_string(),
            started_at_unix,
            finished_at_unix: unix_now(),
            files,
        },
    )
}

fn unix_now() -> f64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs_f64())
        .unwrap_or(0.0)
}

fn print_summary(summary: &Summary) {
    match (summary.convergence_time, summary.rounds_to_converge) {
        (Some(t), Some(r)) => println!("  convergence_time: {t} s ({r} rounds)"),
        _ => println!("  convergence_time: none"),
    }
    println!(
        "  steady_state_amplitude: {:.6} rad",
        summary.steady_state_amplitude
    );
    println!("  final_metric: {:.6} rad", summary.final_metric);
    if summary.truncated {
        println!("  truncated: the network died before t_end");
    }
}

fn print_comparison(comparison: &MethodComparison) {
    for m in &comparison.methods {
        println!(
            "  {:<20} converged {}/{}  ct mean {:.2} s  amplitude mean {:.4} rad",
            m.method,
            m.converged,
            comparison.seeds.len(),
            m.convergence_time.mean,
            m.steady_state_amplitude.mean,
        );
    }
    for o in &comparison.orderings {
        println!(
            "  {} vs {}: no slower in {:.0}% of seeds, no noisier in {:.0}%",
            o.first,
            o.second,
            100.0 * o.frac_first_no_slower,
            100.0 * o.frac_first_no_noisier,
        );
    }
}
