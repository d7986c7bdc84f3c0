//! Experiment configuration: presets, flat TOML files and flag overrides.
//!
//! Resolution order is preset, then file, then flags. The preset is picked
//! by the `--experiment` flag, else by the file's `experiment` key, else
//! `custom`. Every key a file may set is a field of [`ExperimentConfig`];
//! anything else is rejected.

use std::fmt;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use colldeco_core::{CatState, Constants, GasEnvironment, GridSpec, MassRatio, MomentumModel, Tracer};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum Experiment {
    /// One collision with a fixed gas packet (alpha = 0.04).
    WignerSingleCollision,
    /// One collision with a lighter, slower gas packet (alpha = 0.002).
    WignerLightGas,
    /// Position cat, decoherence per collision over temperature.
    PositionSweep,
    /// The same cat at higher temperatures, where fringes invert.
    HighTemperatureSweep,
    /// Momentum cat, decoherence per collision over the horizon.
    MomentumSweep,
    /// Starts from the position-sweep values; meant to be configured.
    Custom,
}

impl Experiment {
    pub const ALL: [Experiment; 6] = [
        Self::WignerSingleCollision,
        Self::WignerLightGas,
        Self::PositionSweep,
        Self::HighTemperatureSweep,
        Self::MomentumSweep,
        Self::Custom,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::WignerSingleCollision => "wigner_single_collision",
            Self::WignerLightGas => "wigner_light_gas",
            Self::PositionSweep => "position_sweep",
            Self::HighTemperatureSweep => "high_temperature_sweep",
            Self::MomentumSweep => "momentum_sweep",
            Self::Custom => "custom",
        }
    }

    /// Whether the experiment is a single fixed collision rather than a sweep.
    pub fn is_single_collision(self) -> bool {
        matches!(self, Self::WignerSingleCollision | Self::WignerLightGas)
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepAxis {
    Temperature,
    Horizon,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GasMomentumModel {
    Thermal,
    Effective,
}

/// A fully resolved experiment. Field names are the config-file keys.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: Experiment,

    pub x_a: f64,
    pub p_a: f64,
    pub x_b: f64,
    pub p_b: f64,
    pub sigma: f64,
    /// Coherence `c` of the initial cat.
    pub coherence: f64,
    /// Relative phase of the initial cat.
    pub phase: f64,
    pub tracer_mass: f64,
    pub hbar: f64,
    pub k_b: f64,

    /// `m_g / m`; the gas packet width follows from width matching.
    pub alpha: f64,
    pub temperature: f64,
    pub density: f64,
    pub horizon: f64,
    pub momentum_model: GasMomentumModel,

    /// Gas packet of the single-collision experiments.
    pub x_g: f64,
    pub p_g: f64,

    pub sweep_axis: SweepAxis,
    pub sweep_values: Vec<f64>,
    /// Further values of the parameter not swept (horizon for a temperature
    /// sweep and vice versa), one extra sweep file each.
    pub series_values: Vec<f64>,
    /// Paired `(temperature, horizon)` points at which the averaged
    /// post-collision Wigner function is written out.
    pub snapshot_temperatures: Vec<f64>,
    pub snapshot_horizons: Vec<f64>,

    pub n_samples: usize,
    /// Collisions averaged into each snapshot grid.
    pub grid_samples: usize,
    pub seed: u64,
    /// Worker threads for the Monte-Carlo engine (0: all cores).
    pub workers: usize,

    pub grid_nx: usize,
    pub grid_np: usize,
    pub grid_x_min: f64,
    pub grid_x_max: f64,
    pub grid_p_min: f64,
    pub grid_p_max: f64,

    pub out_dir: PathBuf,
}

pub const DEFAULT_SAMPLES: usize = 10_000;
pub const DEFAULT_GRID_SAMPLES: usize = 200;

impl ExperimentConfig {
    pub fn preset(experiment: Experiment) -> Self {
        let position = Self {
            experiment,
            x_a: 20.0,
            p_a: 0.0,
            x_b: -20.0,
            p_b: 0.0,
            sigma: 4.0,
            coherence: 1.0,
            phase: 0.0,
            tracer_mass: 1.0,
            hbar: 1.0,
            k_b: 1.0,
            alpha: 1e-4,
            temperature: 0.2,
            density: 1e-4,
            horizon: 20.0,
            momentum_model: GasMomentumModel::Thermal,
            x_g: 0.0,
            p_g: 0.0,
            sweep_axis: SweepAxis::Temperature,
            sweep_values: vec![0.05, 0.1, 0.2, 0.3, 0.5, 0.75, 1.0, 1.5],
            series_values: Vec::new(),
            snapshot_temperatures: vec![0.2, 0.5, 1.5],
            snapshot_horizons: vec![20.0, 20.0, 20.0],
            n_samples: DEFAULT_SAMPLES,
            grid_samples: DEFAULT_GRID_SAMPLES,
            seed: 0,
            workers: 0,
            grid_nx: 128,
            grid_np: 128,
            grid_x_min: -35.0,
            grid_x_max: 35.0,
            grid_p_min: -1.0,
            grid_p_max: 1.0,
            out_dir: PathBuf::from("output").join(experiment.name()),
        };
        match experiment {
            Experiment::WignerSingleCollision => Self {
                x_a: 15.0,
                x_b: 0.0,
                p_a: 0.0,
                p_b: 1.5,
                alpha: 0.04,
                temperature: 0.5,
                x_g: 100.0,
                p_g: -1.0,
                sweep_values: Vec::new(),
                snapshot_temperatures: Vec::new(),
                snapshot_horizons: Vec::new(),
                grid_x_min: -20.0,
                grid_x_max: 40.0,
                grid_p_min: -3.0,
                grid_p_max: 3.0,
                ..position
            },
            Experiment::WignerLightGas => {
                Self { x_g: 500.0, p_g: -0.2, alpha: 0.002, ..Self::preset(Experiment::WignerSingleCollision) }
                    .with_experiment(experiment)
            }
            Experiment::PositionSweep | Experiment::Custom => Self {
                snapshot_temperatures: if experiment == Experiment::Custom {
                    Vec::new()
                } else {
                    position.snapshot_temperatures.clone()
                },
                snapshot_horizons: if experiment == Experiment::Custom {
                    Vec::new()
                } else {
                    position.snapshot_horizons.clone()
                },
                ..position
            },
            Experiment::HighTemperatureSweep => Self {
                sweep_values: vec![1.0, 1.5, 2.0, 2.5, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0, 10.0],
                snapshot_temperatures: vec![7.0],
                snapshot_horizons: vec![20.0],
                ..position
            },
            Experiment::MomentumSweep => Self {
                x_a: 0.0,
                x_b: 0.0,
                p_a: 1.2,
                p_b: -1.2,
                temperature: 0.5,
                sweep_axis: SweepAxis::Horizon,
                sweep_values: vec![5.0, 10.0, 15.0, 20.0, 25.0, 30.0, 35.0, 40.0, 45.0, 50.0],
                series_values: vec![1.0],
                snapshot_temperatures: vec![0.5, 0.5, 3.0],
                snapshot_horizons: vec![20.0, 50.0, 20.0],
                grid_x_min: -12.0,
                grid_x_max: 12.0,
                grid_p_min: -2.0,
                grid_p_max: 2.0,
                ..position
            },
        }
    }

    fn with_experiment(self, experiment: Experiment) -> Self {
        Self { experiment, out_dir: PathBuf::from("output").join(experiment.name()), ..self }
    }

    pub fn constants(&self) -> colldeco_core::Result<Constants> {
        Constants::new(self.hbar, self.k_b)
    }

    pub fn tracer(&self) -> colldeco_core::Result<Tracer> {
        Tracer::new(self.tracer_mass)
    }

    pub fn cat(&self) -> colldeco_core::Result<CatState> {
        let cat = CatState::superposition(self.x_a, self.p_a, self.x_b, self.p_b, self.sigma)?;
        CatState::new(cat.a, cat.b, self.coherence, self.phase)
    }

    pub fn mass_ratio(&self) -> colldeco_core::Result<MassRatio> {
        MassRatio::new(self.alpha)
    }

    /// Width-matched gas at `temperature`.
    pub fn gas(&self, temperature: f64) -> colldeco_core::Result<GasEnvironment> {
        let env = GasEnvironment::width_matched(
            &self.tracer()?,
            self.sigma,
            self.mass_ratio()?,
            temperature,
            self.density,
            self.constants()?,
        )?;
        Ok(env.with_momentum_model(match self.momentum_model {
            GasMomentumModel::Thermal => MomentumModel::Thermal,
            GasMomentumModel::Effective => MomentumModel::Effective,
        }))
    }

    pub fn grid(&self) -> colldeco_core::Result<GridSpec> {
        GridSpec::new(self.grid_nx, self.grid_np, self.grid_x_min, self.grid_x_max, self.grid_p_min, self.grid_p_max)
    }

    /// Values of the parameter held fixed along each sweep file.
    pub fn series(&self) -> Vec<f64> {
        let primary = match self.sweep_axis {
            SweepAxis::Temperature => self.horizon,
            SweepAxis::Horizon => self.temperature,
        };
        std::iter::once(primary).chain(self.series_values.iter().copied()).collect()
    }

    /// `(temperature, horizon)` for sweep point `value` of series `fixed`.
    pub fn sweep_point(&self, fixed: f64, value: f64) -> (f64, f64) {
        match self.sweep_axis {
            SweepAxis::Temperature => (value, fixed),
            SweepAxis::Horizon => (fixed, value),
        }
    }

    /// Checks every invariant and reports all violations at once.
    pub fn validate(&self) -> Result<(), ConfigError> {
        let mut v = Vec::new();
        let mut positive = |name: &str, value: f64| {
            if !(value.is_finite() && value > 0.0) {
                v.push(format!("{name} must be positive and finite (got {value})"));
            }
        };
        positive("sigma", self.sigma);
        positive("tracer_mass", self.tracer_mass);
        positive("hbar", self.hbar);
        positive("k_b", self.k_b);
        positive("alpha", self.alpha);
        positive("temperature", self.temperature);
        positive("density", self.density);
        positive("horizon", self.horizon);
        for (name, value) in [
            ("x_a", self.x_a),
            ("p_a", self.p_a),
            ("x_b", self.x_b),
            ("p_b", self.p_b),
            ("phase", self.phase),
            ("x_g", self.x_g),
            ("p_g", self.p_g),
        ] {
            if !value.is_finite() {
                v.push(format!("{name} must be finite (got {value})"));
            }
        }
        if !(0.0..=1.0).contains(&self.coherence) {
            v.push(format!("coherence must lie in [0, 1] (got {})", self.coherence));
        } else if self.coherence == 0.0 && !self.experiment.is_single_collision() {
            v.push("coherence must be positive for decoherence sweeps".into());
        }

        if !self.experiment.is_single_collision() {
            if self.sweep_values.is_empty() {
                v.push("sweep_values must not be empty".into());
            }
            let axis = match self.sweep_axis {
                SweepAxis::Temperature => "sweep_values (temperatures)",
                SweepAxis::Horizon => "sweep_values (horizons)",
            };
            for &value in &self.sweep_values {
                if !(value.is_finite() && value > 0.0) {
                    v.push(format!("{axis} must be positive (got {value})"));
                }
            }
            for &value in &self.series_values {
                if !(value.is_finite() && value > 0.0) {
                    v.push(format!("series_values must be positive (got {value})"));
                }
            }
            if self.n_samples < 2 {
                v.push(format!("n_samples must be at least 2 (got {})", self.n_samples));
            }
        }
        if self.snapshot_temperatures.len() != self.snapshot_horizons.len() {
            v.push(format!(
                "snapshot_temperatures ({}) and snapshot_horizons ({}) must pair up",
                self.snapshot_temperatures.len(),
                self.snapshot_horizons.len()
            ));
        }
        for &value in self.snapshot_temperatures.iter().chain(&self.snapshot_horizons) {
            if !(value.is_finite() && value > 0.0) {
                v.push(format!("snapshot values must be positive (got {value})"));
            }
        }
        if !self.snapshot_temperatures.is_empty() && self.grid_samples == 0 {
            v.push("grid_samples must be positive when snapshots are requested".into());
        }
        if self.grid_nx < 2 || self.grid_np < 2 {
            v.push(format!("grid needs at least 2x2 nodes (got {}x{})", self.grid_nx, self.grid_np));
        }
        // Negated so that NaN bounds are rejected too.
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        if !(self.grid_x_min < self.grid_x_max) {
            v.push(format!("grid_x_min {} must be below grid_x_max {}", self.grid_x_min, self.grid_x_max));
        }
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        if !(self.grid_p_min < self.grid_p_max) {
            v.push(format!("grid_p_min {} must be below grid_p_max {}", self.grid_p_min, self.grid_p_max));
        }

        // Only meaningful once the basic quantities are sane.
        if v.is_empty() {
            let mut temperatures = vec![self.temperature];
            temperatures.extend(&self.snapshot_temperatures);
            match self.sweep_axis {
                SweepAxis::Temperature if !self.experiment.is_single_collision() => {
                    temperatures.extend(&self.sweep_values)
                }
                SweepAxis::Horizon => temperatures.extend(&self.series_values),
                _ => {}
            }
            for t in temperatures {
                if let Err(e) = self.gas(t) {
                    v.push(format!("gas at temperature {t}: {e}"));
                }
            }
        }

        if v.is_empty() {
            Ok(())
        } else {
            Err(ConfigError::Invalid(v))
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("config {path}: {message}")]
    Parse { path: PathBuf, message: String },
    #[error("config {path}: unknown key `{key}`")]
    UnknownKey { path: PathBuf, key: String },
    #[error("invalid configuration:\n  - {}", .0.join("\n  - "))]
    Invalid(Vec<String>),
}

/// Values given on the command line; `None` leaves the file or preset value.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub experiment: Option<Experiment>,
    pub seed: Option<u64>,
    pub n_samples: Option<usize>,
    pub horizon: Option<f64>,
    /// `nx, np, x_min, x_max, p_min, p_max`
    pub grid: Option<(usize, usize, f64, f64, f64, f64)>,
    pub out_dir: Option<PathBuf>,
    pub workers: Option<usize>,
    pub grid_samples: Option<usize>,
}

impl Overrides {
    fn apply(&self, config: &mut ExperimentConfig) {
        if let Some(seed) = self.seed {
            config.seed = seed;
        }
        if let Some(n) = self.n_samples {
            config.n_samples = n;
        }
        if let Some(t) = self.horizon {
            config.horizon = t;
        }
        if let Some((nx, np, x_min, x_max, p_min, p_max)) = self.grid {
            config.grid_nx = nx;
            config.grid_np = np;
            config.grid_x_min = x_min;
            config.grid_x_max = x_max;
            config.grid_p_min = p_min;
            config.grid_p_max = p_max;
        }
        if let Some(dir) = &self.out_dir {
            config.out_dir = dir.clone();
        }
        if let Some(w) = self.workers {
            config.workers = w;
        }
        if let Some(g) = self.grid_samples {
            config.grid_samples = g;
        }
    }
}

/// Parses `NX,NP,XMIN,XMAX,PMIN,PMAX`.
pub fn parse_grid(text: &str) -> Result<(usize, usize, f64, f64, f64, f64), String> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.len() != 6 {
        return Err(format!("expected NX,NP,XMIN,XMAX,PMIN,PMAX, got {} fields", parts.len()));
    }
    let count = |s: &str| s.parse::<usize>().map_err(|e| format!("grid size `{s}`: {e}"));
    let float = |s: &str| s.parse::<f64>().map_err(|e| format!("grid bound `{s}`: {e}"));
    Ok((count(parts[0])?, count(parts[1])?, float(parts[2])?, float(parts[3])?, float(parts[4])?, float(parts[5])?))
}

/// Resolves preset, optional file and flag overrides into a validated config.
pub fn load_config(path: Option<&Path>, overrides: &Overrides) -> Result<ExperimentConfig, ConfigError> {
    let file = match path {
        Some(path) => Some((path, read_table(path)?)),
        None => None,
    };
    let experiment = match (overrides.experiment, &file) {
        (Some(e), _) => e,
        (None, Some((path, table))) => match table.get("experiment") {
            Some(value) => value.clone().try_into().map_err(|e: toml::de::Error| ConfigError::Parse {
                path: path.to_path_buf(),
                message: format!("key `experiment`: {e}"),
            })?,
            None => Experiment::Custom,
        },
        (None, None) => Experiment::Custom,
    };

    let preset = ExperimentConfig::preset(experiment);
    let mut config = match file {
        Some((path, table)) => {
            let base = toml::Table::try_from(&preset).expect("presets serialize to TOML");
            let mut merged = base.clone();
            for (key, value) in &table {
                if !merged.contains_key(key) {
                    return Err(ConfigError::UnknownKey { path: path.to_path_buf(), key: key.clone() });
                }
                merged.insert(key.clone(), value.clone());
            }
            merged.insert("experiment".into(), toml::Value::String(experiment.name().into()));
            toml::Value::Table(merged).try_into().map_err(|e: toml::de::Error| {
                // Tables carry no spans, so find the offending key by trying each one alone.
                let culprit = table.iter().find(|(key, value)| {
                    let mut single = base.clone();
                    single.insert((*key).clone(), (*value).clone());
                    toml::Value::Table(single).try_into::<ExperimentConfig>().is_err()
                });
                let message = match culprit {
                    Some((key, _)) => format!("key `{key}`: {}", e.message()),
                    None => e.message().to_string(),
                };
                ConfigError::Parse { path: path.to_path_buf(), message }
            })?
        }
        None => preset,
    };
    overrides.apply(&mut config);
    config.validate()?;
    Ok(config)
}

fn read_table(path: &Path) -> Result<toml::Table, ConfigError> {
    let text =
        std::fs::read_to_string(path).map_err(|source| ConfigError::Read { path: path.to_path_buf(), source })?;
    text.parse::<toml::Table>().map_err(|e| ConfigError::Parse { path: path.to_path_buf(), message: e.to_string() })
}

/// The resolved config as a flat TOML document, loadable with `--config`.
pub fn to_toml(config: &ExperimentConfig) -> String {
    toml::to_string(config).expect("configs serialize to TOML")
}
