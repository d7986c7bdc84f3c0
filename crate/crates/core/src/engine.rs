//! Decoherence per collision: closed forms and Monte-Carlo phase averaging.
//!
//! The closed forms all reduce to the kernel
//! `G(a) = \int_0^\infty e^{-u^2} sin(a u) du = F(a / 2)` with `F` Dawson's
//! function. Position cats are parameterized by
//! `s = 2 x_D sqrt(2 m_g k_B T) / hbar`, momentum cats by
//! `r = t sqrt(2 m_g k_B T) p_D / (m hbar)`.

use std::f64::consts::{PI, TAU};

use log::warn;
use rayon::prelude::*;

use crate::error::{positive, require, Error, Result};
use crate::kinematics::{coherence_damping, collide_cat, MassRatio};
use crate::phase_space::{CatDescriptors, CatState, Tracer};
use crate::quadrature::{uniform_breaks, Quadrature};
use crate::special::dawson;
use crate::thermal::{collision_rate, regime_report, stream_rng, CollisionSampler, GasEnvironment};
use crate::wigner::{antinode, cosine_argument, wigner_at, ANTINODE_FLOOR};

/// Samples drawn from one random stream. Fixed, so results do not depend
/// on how batches are scheduled across threads.
pub const MC_BATCH_SIZE: usize = 1024;

/// `\int_0^\infty e^{-u^2} sin(a u) du`, evaluated as `F(a / 2)`.
pub fn sine_gauss_integral(a: f64) -> f64 {
    dawson(0.5 * a)
}

/// [`sine_gauss_integral`] by adaptive quadrature, with at least one
/// 15-node panel per oscillation period. Used to cross-check the Dawson route.
pub fn sine_gauss_integral_quadrature(a: f64) -> Result<f64> {
    if a == 0.0 {
        return Ok(0.0);
    }
    // e^{-u^2} is below 1e-18 beyond this cut.
    let cutoff = 6.5;
    let piece = (TAU / a.abs()).min(0.5);
    let quad = Quadrature::with_tolerance(1e-13, 0.0);
    let breaks = uniform_breaks(0.0, cutoff, piece);
    Ok(quad.integrate_with_breaks(|u| (-u * u).exp() * (a * u).sin(), &breaks)?.value)
}

/// `s = 2 x_D sqrt(2 m_g k_B T) / hbar`.
pub fn position_parameter(x_diff: f64, env: &GasEnvironment) -> f64 {
    2.0 * x_diff * (2.0 * env.momentum_variance()).sqrt() / env.consts.hbar
}

/// `r = t sqrt(2 m_g k_B T) p_D / (m hbar)`.
pub fn momentum_parameter(p_diff: f64, tracer: &Tracer, t: f64, env: &GasEnvironment) -> f64 {
    t * (2.0 * env.momentum_variance()).sqrt() * p_diff / (tracer.mass * env.consts.hbar)
}

/// Thermally averaged interference left after one collision, `1 - s G(s)`.
/// Negative values mean the fringes came out phase-inverted.
pub fn position_coherence_after(s: f64) -> f64 {
    1.0 - s * sine_gauss_integral(s)
}

/// `s G(s)`; may exceed one.
pub fn position_decoherence_from_parameter(s: f64) -> f64 {
    s * sine_gauss_integral(s)
}

pub fn position_decoherence_per_collision(x_diff: f64, env: &GasEnvironment) -> f64 {
    position_decoherence_from_parameter(position_parameter(x_diff, env))
}

/// Small-separation limit `4 m_g k_B T x_D^2 / hbar^2`.
pub fn position_decoherence_small_separation(x_diff: f64, env: &GasEnvironment) -> f64 {
    4.0 * env.momentum_variance() * x_diff * x_diff / env.consts.hbar.powi(2)
}

/// Collision rate times decoherence per collision.
pub fn position_decoherence_rate(x_diff: f64, env: &GasEnvironment) -> f64 {
    collision_rate(env) * position_decoherence_per_collision(x_diff, env)
}

/// The same rate written out: `4 x_D n_g k_B T / (sqrt(pi) hbar) G(s)`.
pub fn position_decoherence_rate_explicit(x_diff: f64, env: &GasEnvironment) -> f64 {
    let thermal_energy = env.consts.k_b * env.kinetic_temperature();
    4.0 * x_diff * env.density * thermal_energy / (PI.sqrt() * env.consts.hbar)
        * sine_gauss_integral(position_parameter(x_diff, env))
}

/// Small-separation rate `8 n_g sqrt(m_g) (k_B T)^{3/2} x_D^2 / (sqrt(2 pi) hbar^2)`.
pub fn position_decoherence_rate_small_separation(x_diff: f64, env: &GasEnvironment) -> f64 {
    let thermal_energy = env.consts.k_b * env.kinetic_temperature();
    8.0 * env.density * env.gas_mass.sqrt() * thermal_energy.powf(1.5) * x_diff * x_diff
        / ((2.0 * PI).sqrt() * env.consts.hbar.powi(2))
}

/// `1 - F(r) / r`, the decoherence per collision of a momentum cat over a
/// horizon; `r = 0` gives 0.
pub fn momentum_decoherence_from_parameter(r: f64) -> f64 {
    let r = r.abs();
    if r < 0.5 {
        // 1 - F(r)/r = sum_{n>=1} (-1)^{n+1} (2 r^2)^n / (2n+1)!!, free of cancellation.
        let x = 2.0 * r * r;
        let mut term = 1.0;
        let mut sum = 0.0;
        let mut n = 0.0;
        loop {
            n += 1.0;
            term *= -x / (2.0 * n + 1.0);
            sum -= term;
            if term.abs() <= 1e-17 * sum.abs() {
                return sum;
            }
        }
    }
    1.0 - dawson(r) / r
}

pub fn momentum_decoherence_per_collision(p_diff: f64, tracer: &Tracer, t: f64, env: &GasEnvironment) -> Result<f64> {
    positive("horizon", t)?;
    Ok(momentum_decoherence_from_parameter(momentum_parameter(p_diff, tracer, t, env)))
}

/// Small-`r` limit `4 m_g k_B T (t p_D / m)^2 / (3 hbar^2)`.
pub fn momentum_decoherence_small_time(p_diff: f64, tracer: &Tracer, t: f64, env: &GasEnvironment) -> f64 {
    let drift = t * p_diff / tracer.mass;
    4.0 * env.momentum_variance() * drift * drift / (3.0 * env.consts.hbar.powi(2))
}

/// Position decoherence of the freely separating cat, `x_D(t') = p_D t' / m`,
/// averaged over collision times `t'` in `(0, t)`. Equals
/// [`momentum_decoherence_per_collision`] identically.
pub fn time_averaged_position_decoherence(p_diff: f64, tracer: &Tracer, t: f64, env: &GasEnvironment) -> Result<f64> {
    positive("horizon", t)?;
    let s_end = position_parameter(p_diff * t / tracer.mass, env);
    let piece = if s_end == 0.0 { t } else { (t * TAU / s_end.abs()).min(t / 4.0) };
    let quad = Quadrature::with_tolerance(1e-14, 1e-13);
    let integral = quad.integrate_with_breaks(
        |tp| position_decoherence_per_collision(p_diff * tp / tracer.mass, env),
        &uniform_breaks(0.0, t, piece),
    )?;
    Ok(integral.value / t)
}

/// Decoherence from the which-branch information carried off by the gas
/// particle, `1 - c_bar`, with its first-order forms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementDecoherence {
    pub exact: f64,
    /// `alpha x_D^2 / sigma^2`
    pub position_approx: f64,
    /// `alpha sigma^2 p_D^2 / hbar^2`
    pub momentum_approx: f64,
}

pub fn measurement_decoherence(
    desc: &CatDescriptors,
    sigma: f64,
    alpha: MassRatio,
    consts: &crate::phase_space::Constants,
) -> MeasurementDecoherence {
    let a = alpha.value();
    MeasurementDecoherence {
        exact: -coherence_damping(desc, sigma, alpha, consts).ln().exp_m1(),
        position_approx: a * desc.x_diff.powi(2) / sigma.powi(2),
        momentum_approx: a * (sigma * desc.p_diff / consts.hbar).powi(2),
    }
}

/// Momentum-superposition decoherence rate of a rival master equation,
/// `(8 sqrt(2 pi) sigma n_g / 3) (p / m)^2 sqrt(m_g / k_B T)`, for the
/// momentum cat `|p> + |-p>` and a constant cross-section `sigma`.
/// Kept to show that it decreases with temperature.
pub fn breuer_rate(p: f64, tracer: &Tracer, env: &GasEnvironment, cross_section: f64) -> Result<f64> {
    positive("scattering cross-section", cross_section)?;
    Ok(8.0 * (2.0 * PI).sqrt() * cross_section * env.density / 3.0
        * (p / tracer.mass).powi(2)
        * (env.gas_mass / (env.consts.k_b * env.temperature)).sqrt())
}

/// Closed-form decoherence per collision for the cat shapes that have one:
/// pure position cats (`p_D = 0`) and pure momentum cats (`x_D = 0`).
pub fn analytic_decoherence(cat: &CatState, env: &GasEnvironment, tracer: &Tracer, t: f64) -> Result<Option<f64>> {
    let d = cat.descriptors();
    Ok(match (d.x_diff == 0.0, d.p_diff == 0.0) {
        (_, true) => Some(position_decoherence_per_collision(d.x_diff, env)),
        (true, false) => Some(momentum_decoherence_per_collision(d.p_diff, tracer, t, env)?),
        (false, false) => None,
    })
}

/// Sample mean of a decoherence estimator with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub n_samples: usize,
    pub seed: u64,
}

impl McEstimate {
    /// `|mean - value|` in units of the standard error.
    pub fn deviation_from(&self, value: f64) -> f64 {
        (self.mean - value).abs() / self.std_error
    }
}

/// Monte-Carlo decoherence of one thermally averaged collision.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McDecoherence {
    /// `1 - <W_1(x*, p*)> / W_0(x*, p*)` at the initial antinode.
    pub wigner: McEstimate,
    /// `1 - <cos Delta_k>`: phase averaging alone, `Delta_k` being the shift
    /// of the cosine argument at the antinode produced by sample `k`.
    pub phase: McEstimate,
    /// `c_bar`, identical for every sample.
    pub damping: f64,
}

impl McDecoherence {
    /// `1 - c_bar <cos Delta_k>`: phase averaging plus information exchange.
    pub fn combined(&self) -> McEstimate {
        McEstimate {
            mean: 1.0 - self.damping * (1.0 - self.phase.mean),
            std_error: self.damping * self.phase.std_error,
            ..self.phase
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct McOptions {
    /// Worker threads; 0 uses the global rayon pool. Does not affect results.
    pub workers: usize,
}

#[derive(Debug, Clone, Copy, Default)]
struct RunningStats {
    n: f64,
    mean: f64,
    m2: f64,
}

impl RunningStats {
    fn push(&mut self, x: f64) {
        self.n += 1.0;
        let delta = x - self.mean;
        self.mean += delta / self.n;
        self.m2 += delta * (x - self.mean);
    }

    fn merge(self, other: Self) -> Self {
        if other.n == 0.0 {
            return self;
        }
        if self.n == 0.0 {
            return other;
        }
        let n = self.n + other.n;
        let delta = other.mean - self.mean;
        Self { n, mean: self.mean + delta * other.n / n, m2: self.m2 + other.m2 + delta * delta * self.n * other.n / n }
    }

    fn std_error(&self) -> f64 {
        (self.m2 / (self.n - 1.0)).sqrt() / self.n.sqrt()
    }
}

fn batches(n_samples: usize) -> Vec<(u64, usize)> {
    (0..n_samples.div_ceil(MC_BATCH_SIZE))
        .map(|b| (b as u64, MC_BATCH_SIZE.min(n_samples - b * MC_BATCH_SIZE)))
        .collect()
}

fn in_pool<T: Send>(workers: usize, job: impl FnOnce() -> T + Send) -> T {
    if workers == 0 {
        return job();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(workers).build() {
        Ok(pool) => pool.install(job),
        Err(_) => job(),
    }
}

/// Estimates the decoherence per collision of `cat` by colliding it with
/// `n_samples` gas particles drawn from the thermal collision ensemble of
/// horizon `t`.
///
/// Batch `b` uses random stream `b` of `seed`; batch statistics are merged
/// in batch order, so the result is bit-identical for a given
/// `(seed, n_samples)` whatever the thread count.
pub fn mc_decoherence(
    cat: &CatState,
    env: &GasEnvironment,
    tracer: &Tracer,
    t: f64,
    n_samples: usize,
    seed: u64,
) -> Result<McDecoherence> {
    mc_decoherence_with(cat, env, tracer, t, n_samples, seed, McOptions::default())
}

pub fn mc_decoherence_with(
    cat: &CatState,
    env: &GasEnvironment,
    tracer: &Tracer,
    t: f64,
    n_samples: usize,
    seed: u64,
    options: McOptions,
) -> Result<McDecoherence> {
    if n_samples < 2 {
        return Err(Error::TooFewSamples { min: 2, got: n_samples });
    }
    cat.validate()?;
    require(cat.c > 0.0, "coherence c", || "Monte-Carlo decoherence needs a coherent cat (c > 0)".into())?;
    let consts = env.consts;
    for warning in regime_report(env, tracer, cat.sigma(), t).warnings {
        warn!("{warning}");
    }
    let sampler = CollisionSampler::new(env, t)?;
    let alpha = env.mass_ratio(tracer);
    let point = antinode(cat, &consts);
    let reference = wigner_at(cat, point.x, point.p, &consts);
    if reference.abs() < ANTINODE_FLOOR {
        return Err(Error::DegenerateAntinode(reference));
    }
    let reference_arg = cosine_argument(cat, point.x, point.p, &consts);

    let per_batch = in_pool(options.workers, || {
        batches(n_samples)
            .into_par_iter()
            .map(|(stream, count)| {
                let mut rng = stream_rng(seed, stream);
                let mut ratio = RunningStats::default();
                let mut phase = RunningStats::default();
                for _ in 0..count {
                    let sample = sampler.sample(&mut rng);
                    let after = collide_cat(cat, &sample, alpha, &consts);
                    ratio.push(wigner_at(&after, point.x, point.p, &consts) / reference);
                    phase.push((cosine_argument(&after, point.x, point.p, &consts) - reference_arg).cos());
                }
                (ratio, phase)
            })
            .collect::<Vec<_>>()
    });
    let (ratio, phase) = per_batch
        .into_iter()
        .fold((RunningStats::default(), RunningStats::default()), |(r, p), (br, bp)| (r.merge(br), p.merge(bp)));
    let estimate =
        |stats: RunningStats| McEstimate { mean: 1.0 - stats.mean, std_error: stats.std_error(), n_samples, seed };
    Ok(McDecoherence {
        wigner: estimate(ratio),
        phase: estimate(phase),
        damping: coherence_damping(&cat.descriptors(), cat.sigma(), alpha, &consts),
    })
}

/// The cat after each of `n_samples` thermally sampled collisions, in
/// sample order; averaging their Wigner functions gives the one-collision
/// state of the thermal gas.
pub fn collided_ensemble(
    cat: &CatState,
    env: &GasEnvironment,
    tracer: &Tracer,
    t: f64,
    n_samples: usize,
    seed: u64,
) -> Result<Vec<CatState>> {
    let sampler = CollisionSampler::new(env, t)?;
    let alpha = env.mass_ratio(tracer);
    let per_batch: Vec<Vec<CatState>> = batches(n_samples)
        .into_par_iter()
        .map(|(stream, count)| {
            let mut rng = stream_rng(seed, stream);
            (0..count).map(|_| collide_cat(cat, &sampler.sample(&mut rng), alpha, &env.consts)).collect()
        })
        .collect();
    Ok(per_batch.into_iter().flatten().collect())
}

/// Analytic and Monte-Carlo decoherence along a sweep axis.
#[derive(Debug, Clone, PartialEq)]
pub struct DecoherenceCurve {
    pub abscissa: Vec<f64>,
    pub analytic: Vec<Option<f64>>,
    pub mc: Vec<McDecoherence>,
}

impl DecoherenceCurve {
    pub fn len(&self) -> usize {
        self.abscissa.len()
    }

    pub fn is_empty(&self) -> bool {
        self.abscissa.is_empty()
    }
}
