//! Experiment runner for the collisional decoherence model: presets,
//! configuration, data files and run manifests.

pub mod config;
pub mod manifest;
pub mod runner;

pub use config::{load_config, parse_grid, Experiment, ExperimentConfig, Overrides, SweepAxis};
pub use manifest::{verify_manifest, RunManifest};
pub use runner::{run_experiment, RunError};
