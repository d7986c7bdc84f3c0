//! Runs an [`ExperimentConfig`] and writes its data files and manifest.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use colldeco_core::engine::measurement_decoherence;
use colldeco_core::kinematics::{coherence_damping, collision_phase, phase_invariant};
use colldeco_core::wigner::relative_change;
use colldeco_core::{
    analytic_decoherence, antinode, collide_cat, collided_ensemble, mc_decoherence_with, regime_report, CatState,
    CatWigner, CollisionSample, EnsembleWigner, GasEnvironment, McDecoherence, McOptions, WignerGrid,
};
use log::{info, warn};

use crate::config::{ConfigError, ExperimentConfig, SweepAxis};
use crate::manifest::{CollisionSummary, OutputFile, RegimeEntry, RunManifest, MANIFEST_FILE};

pub const SWEEP_HEADER: &str = "abscissa,analytic,mc_mean,mc_se,n";
pub const ANTINODE_HEADER: &str = "series,abscissa,wigner_mean,wigner_se,combined_mean,combined_se,damping,n";

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Core(#[from] colldeco_core::Error),
    #[error("cannot write {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

/// One point of a decoherence sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub abscissa: f64,
    pub analytic: Option<f64>,
    pub mc: McDecoherence,
}

struct Outputs {
    dir: PathBuf,
    files: Vec<OutputFile>,
}

impl Outputs {
    fn new(dir: &Path) -> Result<Self, RunError> {
        fs::create_dir_all(dir).map_err(|source| RunError::Io { path: dir.to_path_buf(), source })?;
        Ok(Self { dir: dir.to_path_buf(), files: Vec::new() })
    }

    fn write(&mut self, name: &str, contents: &[u8]) -> Result<(), RunError> {
        let path = self.dir.join(name);
        fs::write(&path, contents).map_err(|source| RunError::Io { path, source })?;
        self.files.push(OutputFile::describe(name, contents));
        Ok(())
    }

    fn write_grid(&mut self, name: &str, grid: &WignerGrid) -> Result<(), RunError> {
        let mut buf = Vec::with_capacity(grid.values.len() * 72);
        grid.write_csv(&mut buf).expect("writing to memory");
        self.write(name, &buf)
    }
}

/// SplitMix64 finalizer over `(root, purpose, index)`; keeps the seeds of
/// different sweep points and snapshots unrelated.
pub fn derive_seed(root: u64, purpose: u64, index: u64) -> u64 {
    let mut z = root
        .wrapping_add(purpose.wrapping_mul(0xD1B5_4A32_D192_ED03))
        .wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

const SWEEP_SEEDS: u64 = 1;
const SNAPSHOT_SEEDS: u64 = 2;

/// Sweep points are checked (and logged) by the Monte-Carlo engine itself;
/// other entries are logged here.
fn log_regime(entry: &RegimeEntry) {
    for warning in &entry.warnings {
        warn!("T={}, t={}: {warning}", entry.temperature, entry.horizon);
    }
}

fn regime_entry(config: &ExperimentConfig, env: &GasEnvironment, horizon: f64) -> Result<RegimeEntry, RunError> {
    let report = regime_report(env, &config.tracer()?, config.sigma, horizon);
    Ok(RegimeEntry {
        temperature: env.temperature,
        horizon,
        packet_ratio: report.packet_ratio,
        density_ratio: report.density_ratio,
        degeneracy_ratio: report.degeneracy_ratio,
        collision_time: report.collision_time,
        width_match_residual: report.width_match_residual,
        mass_ratio: report.mass_ratio,
        warnings: report.warnings.iter().map(ToString::to_string).collect(),
    })
}

/// Label used in file names, e.g. `T0.5` or `t20`.
fn tag(symbol: char, value: f64) -> String {
    format!("{symbol}{value}")
}

/// Decoherence per collision along one series of the configured sweep.
pub fn sweep_series(config: &ExperimentConfig, fixed: f64, first_index: u64) -> Result<Vec<SweepRow>, RunError> {
    let cat = config.cat()?;
    let tracer = config.tracer()?;
    let options = McOptions { workers: config.workers };
    config
        .sweep_values
        .iter()
        .enumerate()
        .map(|(k, &value)| {
            let (temperature, horizon) = config.sweep_point(fixed, value);
            let env = config.gas(temperature)?;
            let seed = derive_seed(config.seed, SWEEP_SEEDS, first_index + k as u64);
            let mc = mc_decoherence_with(&cat, &env, &tracer, horizon, config.n_samples, seed, options)?;
            Ok(SweepRow { abscissa: value, analytic: analytic_decoherence(&cat, &env, &tracer, horizon)?, mc })
        })
        .collect()
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = format!("{SWEEP_HEADER}\n");
    for row in rows {
        let analytic = row.analytic.map(|v| v.to_string()).unwrap_or_default();
        let phase = row.mc.phase;
        writeln!(out, "{},{},{},{},{}", row.abscissa, analytic, phase.mean, phase.std_error, phase.n_samples)
            .expect("writing to a String");
    }
    out
}

fn antinode_rows(out: &mut String, series: f64, rows: &[SweepRow]) {
    for row in rows {
        let combined = row.mc.combined();
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            series,
            row.abscissa,
            row.mc.wigner.mean,
            row.mc.wigner.std_error,
            combined.mean,
            combined.std_error,
            row.mc.damping,
            row.mc.wigner.n_samples
        )
        .expect("writing to a String");
    }
}

/// Runs the experiment, writes every output into `config.out_dir` and
/// returns the manifest (also written as `manifest.json`).
pub fn run_experiment(config: &ExperimentConfig) -> Result<RunManifest, RunError> {
    config.validate()?;
    let mut outputs = Outputs::new(&config.out_dir)?;
    let mut regime = Vec::new();
    let collision = if config.experiment.is_single_collision() {
        Some(run_single_collision(config, &mut outputs, &mut regime)?)
    } else {
        run_sweep(config, &mut outputs, &mut regime)?;
        None
    };

    let regime_json = serde_json::to_string_pretty(&regime).expect("regime serializes") + "\n";
    outputs.write("regime.json", regime_json.as_bytes())?;

    let manifest = RunManifest {
        tool: env!("CARGO_PKG_NAME").to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        seed: config.seed,
        config: config.clone(),
        regime,
        collision,
        outputs: outputs.files,
    };
    let path = config.out_dir.join(MANIFEST_FILE);
    fs::write(&path, manifest.to_json()).map_err(|source| RunError::Io { path, source })?;
    info!("wrote {} outputs to {}", manifest.outputs.len(), config.out_dir.display());
    Ok(manifest)
}

fn run_single_collision(
    config: &ExperimentConfig,
    outputs: &mut Outputs,
    regime: &mut Vec<RegimeEntry>,
) -> Result<CollisionSummary, RunError> {
    let consts = config.constants()?;
    let cat = config.cat()?;
    let alpha = config.mass_ratio()?;
    let env = config.gas(config.temperature)?;
    let entry = regime_entry(config, &env, config.horizon)?;
    log_regime(&entry);
    regime.push(entry);

    let sample = CollisionSample::new(config.x_g, config.p_g);
    let after = collide_cat(&cat, &sample, alpha, &consts);
    let spec = config.grid()?;
    let before_grid = WignerGrid::sample(spec, &CatWigner::new(cat, consts))?;
    let after_grid = WignerGrid::sample(spec, &CatWigner::new(after, consts))?;
    outputs.write_grid("wigner_before.csv", &before_grid)?;
    outputs.write_grid("wigner_after.csv", &after_grid)?;
    outputs.write_grid("wigner_difference.csv", &after_grid.difference(&before_grid))?;

    let point = antinode(&cat, &consts);
    let desc = cat.descriptors();
    Ok(CollisionSummary {
        damping: coherence_damping(&desc, cat.sigma(), alpha, &consts),
        collision_phase: collision_phase(&desc, &sample, alpha, &consts),
        phase_invariant_before: phase_invariant(&cat, &consts),
        phase_invariant_after: phase_invariant(&after, &consts),
        antinode_x: point.x,
        antinode_p: point.p,
        antinode_change: relative_change(&CatWigner::new(cat, consts), &CatWigner::new(after, consts), point)?,
        measurement_decoherence: measurement_decoherence(&desc, cat.sigma(), alpha, &consts).exact,
    })
}

fn run_sweep(config: &ExperimentConfig, outputs: &mut Outputs, regime: &mut Vec<RegimeEntry>) -> Result<(), RunError> {
    // The series runs over whichever parameter is not swept.
    let series_symbol = match config.sweep_axis {
        SweepAxis::Temperature => 't',
        SweepAxis::Horizon => 'T',
    };
    let mut antinode_csv = format!("{ANTINODE_HEADER}\n");
    let mut index = 0;
    for (j, fixed) in config.series().into_iter().enumerate() {
        info!("{}: series {series_symbol}={fixed}", config.experiment);
        let rows = sweep_series(config, fixed, index)?;
        index += rows.len() as u64;
        for &value in &config.sweep_values {
            let (temperature, horizon) = config.sweep_point(fixed, value);
            regime.push(regime_entry(config, &config.gas(temperature)?, horizon)?);
        }
        let name = if j == 0 { "sweep.csv".to_string() } else { format!("sweep_{}.csv", tag(series_symbol, fixed)) };
        outputs.write(&name, sweep_csv(&rows).as_bytes())?;
        antinode_rows(&mut antinode_csv, fixed, &rows);
    }
    outputs.write("sweep_antinode.csv", antinode_csv.as_bytes())?;

    if config.snapshot_temperatures.is_empty() {
        return Ok(());
    }
    let consts = config.constants()?;
    let cat = config.cat()?;
    let tracer = config.tracer()?;
    let spec = config.grid()?;
    let before = WignerGrid::sample(spec, &CatWigner::new(cat, consts))?;
    outputs.write_grid("wigner_before.csv", &before)?;
    for (k, (&temperature, &horizon)) in config.snapshot_temperatures.iter().zip(&config.snapshot_horizons).enumerate()
    {
        let env = config.gas(temperature)?;
        let entry = regime_entry(config, &env, horizon)?;
        log_regime(&entry);
        regime.push(entry);
        let seed = derive_seed(config.seed, SNAPSHOT_SEEDS, k as u64);
        let cats: Vec<CatState> = collided_ensemble(&cat, &env, &tracer, horizon, config.grid_samples, seed)?;
        let after = WignerGrid::sample(spec, &EnsembleWigner { cats, consts })?;
        let label = format!("{}_{}", tag('T', temperature), tag('t', horizon));
        outputs.write_grid(&format!("wigner_after_{label}.csv"), &after)?;
        outputs.write_grid(&format!("wigner_difference_{label}.csv"), &after.difference(&before))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derived_seeds_differ() {
        let a = derive_seed(0, SWEEP_SEEDS, 0);
        assert_ne!(a, derive_seed(0, SWEEP_SEEDS, 1));
        assert_ne!(a, derive_seed(0, SNAPSHOT_SEEDS, 0));
        assert_ne!(a, derive_seed(1, SWEEP_SEEDS, 0));
        assert_eq!(a, derive_seed(0, SWEEP_SEEDS, 0));
    }

    #[test]
    fn file_tags() {
        assert_eq!(tag('T', 0.5), "T0.5");
        assert_eq!(tag('t', 20.0), "t20");
    }
}
