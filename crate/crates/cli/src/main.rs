use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::Parser;
use colldeco_cli::config::{to_toml, Experiment, Overrides};
use colldeco_cli::{load_config, parse_grid, run_experiment, verify_manifest};

/// Reproduces single-collision decoherence experiments as CSV data.
///
/// Settings resolve as preset < config file < flags. Diagnostics and regime
/// warnings go to standard error (set RUST_LOG=info for progress).
#[derive(Debug, Parser)]
#[command(name = "colldeco", version)]
struct Cli {
    /// Preset to start from (default: the config file's `experiment`, else custom).
    #[arg(long, value_enum)]
    experiment: Option<Experiment>,
    /// Flat TOML file with config keys.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Monte-Carlo samples per sweep point.
    #[arg(long)]
    samples: Option<usize>,
    /// Horizon t of fixed-horizon experiments.
    #[arg(long)]
    horizon: Option<f64>,
    /// Wigner grid as NX,NP,XMIN,XMAX,PMIN,PMAX.
    #[arg(long, value_parser = parse_grid, allow_hyphen_values = true)]
    grid: Option<(usize, usize, f64, f64, f64, f64)>,
    #[arg(long)]
    out_dir: Option<PathBuf>,
    /// Monte-Carlo worker threads (0: all cores); results do not depend on it.
    #[arg(long)]
    workers: Option<usize>,
    /// Collisions averaged into each snapshot Wigner grid.
    #[arg(long)]
    grid_samples: Option<usize>,
    /// Print the resolved config as TOML and exit.
    #[arg(long)]
    print_config: bool,
    /// Check the checksums of a previous run directory and exit.
    #[arg(long, value_name = "DIR", conflicts_with_all = ["experiment", "config", "print_config"])]
    verify: Option<PathBuf>,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<()> {
    if let Some(dir) = cli.verify {
        let manifest = verify_manifest(&dir)?;
        println!("{}: {} outputs verified", dir.display(), manifest.outputs.len());
        return Ok(());
    }
    let overrides = Overrides {
        experiment: cli.experiment,
        seed: cli.seed,
        n_samples: cli.samples,
        horizon: cli.horizon,
        grid: cli.grid,
        out_dir: cli.out_dir,
        workers: cli.workers,
        grid_samples: cli.grid_samples,
    };
    let config = load_config(cli.config.as_deref(), &overrides)?;
    if cli.print_config {
        print!("{}", to_toml(&config));
        return Ok(());
    }
    let manifest = run_experiment(&config).with_context(|| format!("experiment {}", config.experiment))?;
    for output in &manifest.outputs {
        println!("{}", config.out_dir.join(&output.name).display());
    }
    Ok(())
}
