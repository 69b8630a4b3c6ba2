use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use levelcorr::harness::{self, Overrides, RunConfig, RunOutput};
use levelcorr::Result;

/// Parametric level correlations of Gaussian random matrices.
#[derive(Parser)]
#[command(name = "levelcorr", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// TOML run configuration; missing keys take their defaults.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Master seed; realization i uses stream i.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Fixed-order reductions: output independent of the thread count.
    #[arg(long, global = true)]
    reproducible: bool,
    /// Also write SVG plots.
    #[arg(long, global = true)]
    plot: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Sample spectra of H(X₀).
    Sample,
    /// Monte Carlo estimate of k(ε, Γ↓) on the configured grid.
    Correlate,
    /// Analytic triple integral on the configured grid.
    Analytic,
    /// Calibrate and compare a measured table against a model table.
    Compare { measured: PathBuf, model: PathBuf },
    /// Symmetry-breaking catalog and graded-matrix identity checks.
    Symbreak,
}

fn load(common: &Common) -> Result<RunConfig> {
    let cfg = match &common.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    let mut cfg = cfg.apply(&Overrides {
        seed: common.seed,
        out: common.out.clone(),
        threads: common.threads,
        reproducible: common.reproducible,
    })?;
    cfg.run.plot |= common.plot;
    std::fs::create_dir_all(&cfg.run.out)?;
    Ok(cfg)
}

fn report(out: &RunOutput) {
    print!("{}", out.summary);
    for f in &out.files {
        eprintln!("wrote {}", f.display());
    }
}

/// `Ok(false)` when a verification report ran but did not pass.
fn run(cli: Cli) -> Result<bool> {
    let cfg = load(&cli.common)?;
    match cli.command {
        Command::Sample => report(&harness::run_sample(&cfg)?),
        Command::Correlate => report(&harness::run_correlate(&cfg)?),
        Command::Analytic => report(&harness::run_analytic(&cfg)?),
        Command::Compare { measured, model } => report(&harness::run_compare(&cfg, &measured, &model)?.0),
        Command::Symbreak => {
            let (out, r) = harness::run_symbreak(&cfg)?;
            report(&out);
            return Ok(r.passed);
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
