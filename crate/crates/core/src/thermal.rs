//! Dilute one-dimensional Boltzmann gas and the statistics of the gas
//! particles that hit the tracer during a horizon `(0, t)`.
//!
//! A gas packet centered at `(x_g, p_g)` reaches a tracer sitting near the
//! origin within the horizon exactly when `0 < -x_g m_g / p_g < t`.

use std::f64::consts::PI;
use std::fmt;

use rand::distr::{Distribution, Open01};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{positive, Error, Result};
use crate::kinematics::{CollisionSample, MassRatio};
use crate::phase_space::{Constants, Tracer};
use crate::special::erfc;

/// Ratio above which a "much smaller than one" condition is reported.
pub const SMALL_RATIO_THRESHOLD: f64 = 0.1;
/// Minimum horizon, in collision times, for the coarse-grained description.
pub const COARSE_GRAINING_FACTOR: f64 = 10.0;
/// Relative tolerance on `m sigma^2 = m_g sigma_g^2`.
pub const WIDTH_MATCH_TOLERANCE: f64 = 1e-6;

/// Which temperature sets the momentum spread of the gas packets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MomentumModel {
    /// Approximate the packet momentum law by the Maxwell–Boltzmann
    /// distribution at the gas temperature.
    #[default]
    Thermal,
    /// Use the reduced temperature `T - hbar^2 / (2 m_g k_B sigma_g^2)` that
    /// remains after the packet's own momentum uncertainty is accounted for.
    Effective,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GasEnvironment {
    pub gas_mass: f64,
    pub temperature: f64,
    pub density: f64,
    pub packet_width: f64,
    pub consts: Constants,
    pub momentum_model: MomentumModel,
}

/// `T - hbar^2 / (2 m_g k_B sigma_g^2)`; fails when not positive.
pub fn effective_temperature_of(gas_mass: f64, temperature: f64, packet_width: f64, consts: &Constants) -> Result<f64> {
    let reduced = temperature - consts.hbar.powi(2) / (2.0 * gas_mass * consts.k_b * packet_width.powi(2));
    if reduced > 0.0 {
        Ok(reduced)
    } else {
        Err(Error::NonPositiveEffectiveTemperature(reduced))
    }
}

impl GasEnvironment {
    pub fn new(gas_mass: f64, temperature: f64, density: f64, packet_width: f64, consts: Constants) -> Result<Self> {
        positive("gas mass", gas_mass)?;
        positive("temperature", temperature)?;
        positive("gas density", density)?;
        positive("gas packet width", packet_width)?;
        effective_temperature_of(gas_mass, temperature, packet_width, &consts)?;
        Ok(Self { gas_mass, temperature, density, packet_width, consts, momentum_model: MomentumModel::Thermal })
    }

    /// Gas whose packet width satisfies `m sigma^2 = m_g sigma_g^2` for a
    /// tracer of width `sigma`.
    pub fn width_matched(
        tracer: &Tracer,
        sigma: f64,
        alpha: MassRatio,
        temperature: f64,
        density: f64,
        consts: Constants,
    ) -> Result<Self> {
        positive("mass ratio", alpha.value())?;
        positive("tracer width", sigma)?;
        let gas_mass = alpha.value() * tracer.mass;
        Self::new(gas_mass, temperature, density, sigma / alpha.value().sqrt(), consts)
    }

    pub fn with_momentum_model(self, momentum_model: MomentumModel) -> Self {
        Self { momentum_model, ..self }
    }

    pub fn with_temperature(self, temperature: f64) -> Result<Self> {
        let env = Self::new(self.gas_mass, temperature, self.density, self.packet_width, self.consts)?;
        Ok(env.with_momentum_model(self.momentum_model))
    }

    pub fn effective_temperature(&self) -> f64 {
        effective_temperature_of(self.gas_mass, self.temperature, self.packet_width, &self.consts)
            .expect("validated at construction")
    }

    /// Temperature entering the momentum law of the gas packets.
    pub fn kinetic_temperature(&self) -> f64 {
        match self.momentum_model {
            MomentumModel::Thermal => self.temperature,
            MomentumModel::Effective => self.effective_temperature(),
        }
    }

    /// `m_g k_B T` at the kinetic temperature: the variance of `p_g`.
    pub fn momentum_variance(&self) -> f64 {
        self.gas_mass * self.consts.k_b * self.kinetic_temperature()
    }

    pub fn mass_ratio(&self, tracer: &Tracer) -> MassRatio {
        MassRatio::new(self.gas_mass / tracer.mass).expect("positive masses")
    }
}

/// Maxwell–Boltzmann momentum density.
pub fn maxwell_pdf(env: &GasEnvironment, p: f64) -> f64 {
    let var = env.momentum_variance();
    (-p * p / (2.0 * var)).exp() / (2.0 * PI * var).sqrt()
}

pub fn effective_temperature(env: &GasEnvironment) -> f64 {
    env.effective_temperature()
}

/// Collision rate `R = n_g sqrt(2 k_B T / (pi m_g))` for a slow tracer.
pub fn collision_rate(env: &GasEnvironment) -> f64 {
    env.density * (2.0 * env.consts.k_b * env.kinetic_temperature() / (PI * env.gas_mass)).sqrt()
}

/// Momentum density of the gas particles that do collide,
/// `|p| / (2 m_g k_B T) exp(-p^2 / 2 m_g k_B T)`. Horizon independent.
pub fn colliding_momentum_pdf(env: &GasEnvironment, p: f64) -> f64 {
    let var = env.momentum_variance();
    p.abs() / (2.0 * var) * (-p * p / (2.0 * var)).exp()
}

/// Density of the initial position of a gas particle that collides within
/// `(0, t)`: `k \int_{k|x|}^\infty e^{-u^2} du` with `k = sqrt(m_g) / (t sqrt(2 k_B T))`.
pub fn colliding_position_pdf(env: &GasEnvironment, t: f64, x: f64) -> f64 {
    let k = position_scale(env, t);
    k * 0.5 * PI.sqrt() * erfc(k * x.abs())
}

fn position_scale(env: &GasEnvironment, t: f64) -> f64 {
    env.gas_mass.sqrt() / (t * (2.0 * env.consts.k_b * env.kinetic_temperature()).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RegimeWarning {
    /// Gas packets are not wide compared to the thermal wavelength.
    NarrowGasPackets(f64),
    /// Packets overlap other gas particles; three-body collisions matter.
    DenseGas(f64),
    /// Not in the high-temperature, low-density (Boltzmann) limit.
    NonBoltzmann(f64),
    /// Horizon not long compared with the collision time.
    ShortHorizon { horizon: f64, collision_time: f64 },
    /// Tracer and gas packet widths violate `m sigma^2 = m_g sigma_g^2`.
    WidthMismatch(f64),
    /// Gas particles heavier than the tracer.
    HeavyGas(f64),
}

impl fmt::Display for RegimeWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Self::NarrowGasPackets(r) => write!(f, "hbar/(sigma_g sqrt(m_g k_B T)) = {r:.3e} is not small"),
            Self::DenseGas(r) => {
                write!(f, "n_g sigma_g = {r:.3e} is not small; three-particle collisions not negligible")
            }
            Self::NonBoltzmann(r) => {
                write!(f, "n_g hbar/sqrt(m_g k_B T) = {r:.3e} is not small; Boltzmann statistics questionable")
            }
            Self::ShortHorizon { horizon, collision_time } => write!(
                f,
                "horizon t = {horizon} is below {COARSE_GRAINING_FACTOR} collision times (t_c = {collision_time:.4})"
            ),
            Self::WidthMismatch(r) => {
                write!(f, "width matching m sigma^2 = m_g sigma_g^2 violated (relative residual {r:.3e})")
            }
            Self::HeavyGas(a) => write!(f, "mass ratio alpha = {a} exceeds one"),
        }
    }
}

/// Dimensionless checks of the dilute, high-temperature regime.
#[derive(Debug, Clone, PartialEq)]
pub struct RegimeReport {
    /// `hbar / (sigma_g sqrt(m_g k_B T))`
    pub packet_ratio: f64,
    /// `n_g sigma_g`
    pub density_ratio: f64,
    /// `n_g hbar / sqrt(m_g k_B T)`
    pub degeneracy_ratio: f64,
    /// `t_c = 2 sigma_g sqrt(m_g) / sqrt(k_B T)`
    pub collision_time: f64,
    /// `|m sigma^2 - m_g sigma_g^2| / (m_g sigma_g^2)`
    pub width_match_residual: f64,
    pub mass_ratio: f64,
    pub warnings: Vec<RegimeWarning>,
}

impl RegimeReport {
    pub fn is_clean(&self) -> bool {
        self.warnings.is_empty()
    }
}

/// Evaluates the regime conditions. Never fails; violations become warnings.
pub fn regime_report(env: &GasEnvironment, tracer: &Tracer, sigma: f64, t: f64) -> RegimeReport {
    let thermal_momentum = (env.gas_mass * env.consts.k_b * env.temperature).sqrt();
    let packet_ratio = env.consts.hbar / (env.packet_width * thermal_momentum);
    let density_ratio = env.density * env.packet_width;
    let degeneracy_ratio = env.density * env.consts.hbar / thermal_momentum;
    let collision_time = 2.0 * env.packet_width * env.gas_mass.sqrt() / (env.consts.k_b * env.temperature).sqrt();
    let gas_action = env.gas_mass * env.packet_width.powi(2);
    let width_match_residual = (tracer.mass * sigma * sigma - gas_action).abs() / gas_action;
    let mass_ratio = env.gas_mass / tracer.mass;

    let mut warnings = Vec::new();
    if packet_ratio > SMALL_RATIO_THRESHOLD {
        warnings.push(RegimeWarning::NarrowGasPackets(packet_ratio));
    }
    if density_ratio > SMALL_RATIO_THRESHOLD {
        warnings.push(RegimeWarning::DenseGas(density_ratio));
    }
    if degeneracy_ratio > SMALL_RATIO_THRESHOLD {
        warnings.push(RegimeWarning::NonBoltzmann(degeneracy_ratio));
    }
    if t < COARSE_GRAINING_FACTOR * collision_time {
        warnings.push(RegimeWarning::ShortHorizon { horizon: t, collision_time });
    }
    if width_match_residual > WIDTH_MATCH_TOLERANCE {
        warnings.push(RegimeWarning::WidthMismatch(width_match_residual));
    }
    if mass_ratio > 1.0 {
        warnings.push(RegimeWarning::HeavyGas(mass_ratio));
    }
    RegimeReport {
        packet_ratio,
        density_ratio,
        degeneracy_ratio,
        collision_time,
        width_match_residual,
        mass_ratio,
        warnings,
    }
}

/// Random stream `stream` of the root `seed`: ChaCha8 keyed by the seed,
/// with the stream index selecting one of its 2^64 independent streams.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Draws gas particles conditioned on hitting the tracer within `(0, t)`.
///
/// `|p_g|` is Rayleigh distributed with scale `sqrt(m_g k_B T)` (inverse
/// CDF, one uniform per draw), the direction is a fair coin, and `x_g` is
/// uniform on the reachable interval of length `|p_g| t / m_g` behind the
/// particle. The momentum marginal is the colliding-momentum density and
/// the position marginal the colliding-position density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CollisionSampler {
    momentum_scale: f64,
    reach_per_momentum: f64,
}

impl CollisionSampler {
    pub fn new(env: &GasEnvironment, t: f64) -> Result<Self> {
        positive("horizon", t)?;
        Ok(Self { momentum_scale: env.momentum_variance().sqrt(), reach_per_momentum: t / env.gas_mass })
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> CollisionSample {
        let u: f64 = Open01.sample(rng);
        let v: f64 = Open01.sample(rng);
        let speed = self.momentum_scale * (-2.0 * u.ln()).sqrt();
        let p_g = if rng.random::<bool>() { speed } else { -speed };
        let x_g = -p_g * self.reach_per_momentum * v;
        CollisionSample { x_g, p_g }
    }
}

pub fn sample_collision<R: Rng + ?Sized>(env: &GasEnvironment, t: f64, rng: &mut R) -> Result<CollisionSample> {
    Ok(CollisionSampler::new(env, t)?.sample(rng))
}
