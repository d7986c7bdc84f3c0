//! Decoherence of Gaussian cat states by single collisions with a thermal gas.
//!
//! States are superpositions of two equal-width Gaussian packets. A
//! collision with a gas packet of matched width maps the cat to another cat
//! with shifted centers, damped coherence and a shifted relative phase;
//! averaging that phase over the thermal collision ensemble is what
//! destroys the interference fringes of the Wigner function.
//!
//! Units are natural: `hbar` and `k_B` default to one (see [`Constants`]).

pub mod engine;
pub mod error;
pub mod kinematics;
pub mod phase_space;
pub mod quadrature;
pub mod special;
pub mod thermal;
pub mod wigner;

pub use engine::{
    analytic_decoherence, collided_ensemble, mc_decoherence, mc_decoherence_with, DecoherenceCurve, McDecoherence,
    McEstimate, McOptions,
};
pub use error::{Error, Result};
pub use kinematics::{collide_cat, collide_classical, CollisionSample, MassRatio};
pub use phase_space::{CatDescriptors, CatState, Constants, GaussianPacket, Tracer};
pub use thermal::{regime_report, CollisionSampler, GasEnvironment, MomentumModel, RegimeReport, RegimeWarning};
pub use wigner::{
    antinode, interference_metric, wigner_at, wigner_grid, wigner_oracle, CatWigner, EnsembleWigner, GridSpec,
    PhasePoint, WignerFunction, WignerGrid,
};
