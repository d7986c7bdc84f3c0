//! Particles, Gaussian wave packets and two-branch cat states.
//!
//! Cat states are kept unnormalized: the density operator is
//! `|a><a| + c e^{i phi} |a><b| + c e^{-i phi} |b><a| + |b><b|`, so its trace
//! is not one. With this sign a momentum kick `e^{2 i p_g q / hbar}` shifts
//! `phi` by `+p_g x_D / hbar`, and the Wigner cross term reads
//! `cos(phi + (x_A p_D - p_A x_D) / 2 hbar + ...)`. Every decoherence measure in this crate is a ratio, and
//! [`CatState::trace`] is available for consumers that need probabilities.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{finite, positive, require, Result};

/// Physical constants. Natural units (`hbar = k_B = 1`) by default.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Constants {
    pub hbar: f64,
    pub k_b: f64,
}

impl Default for Constants {
    fn default() -> Self {
        Self { hbar: 1.0, k_b: 1.0 }
    }
}

impl Constants {
    pub fn new(hbar: f64, k_b: f64) -> Result<Self> {
        positive("hbar", hbar)?;
        positive("k_b", k_b)?;
        Ok(Self { hbar, k_b })
    }
}

/// The distinguished particle whose coherence is tracked.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tracer {
    pub mass: f64,
}

impl Tracer {
    pub fn new(mass: f64) -> Result<Self> {
        positive("tracer mass", mass)?;
        Ok(Self { mass })
    }
}

/// Minimum-uncertainty Gaussian wave packet with center `(x, p)` and
/// position width `sigma`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianPacket {
    pub x: f64,
    pub p: f64,
    pub sigma: f64,
}

impl GaussianPacket {
    pub fn new(x: f64, p: f64, sigma: f64) -> Result<Self> {
        finite("packet position", x)?;
        finite("packet momentum", p)?;
        positive("packet width", sigma)?;
        Ok(Self { x, p, sigma })
    }

    /// Position-representation amplitude `<xq|x, p>_sigma`.
    ///
    /// Carries the global phase `e^{-i x p / 2 hbar}`, which is what makes
    /// the cross term of the cat Wigner function come out with the
    /// `(x_A p_D - p_A x_D) / 2 hbar` offset.
    pub fn wavefunction_at(&self, xq: f64, consts: &Constants) -> Complex64 {
        let norm = 1.0 / (PI.sqrt() * self.sigma).sqrt();
        let envelope = (-(self.x - xq).powi(2) / (2.0 * self.sigma * self.sigma)).exp();
        let phase = (xq * self.p - 0.5 * self.x * self.p) / consts.hbar;
        Complex64::from_polar(norm * envelope, phase)
    }

    /// Center transport under free evolution; the width is held fixed.
    pub fn free_evolve(&self, t: f64, tracer: &Tracer) -> Self {
        Self { x: self.x + self.p * t / tracer.mass, ..*self }
    }
}

/// Free-function form of [`GaussianPacket::wavefunction_at`].
pub fn packet_wavefunction_at(packet: &GaussianPacket, xq: f64, consts: &Constants) -> Complex64 {
    packet.wavefunction_at(xq, consts)
}

/// Mean and difference coordinates of the two cat branches.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CatDescriptors {
    /// `(x_a + x_b) / 2`
    pub x_avg: f64,
    /// `x_a - x_b`
    pub x_diff: f64,
    /// `(p_a + p_b) / 2`
    pub p_avg: f64,
    /// `p_a - p_b`
    pub p_diff: f64,
}

impl CatDescriptors {
    /// Branch centers `((x_a, p_a), (x_b, p_b))`.
    pub fn branch_centers(&self) -> ((f64, f64), (f64, f64)) {
        (
            (self.x_avg + 0.5 * self.x_diff, self.p_avg + 0.5 * self.p_diff),
            (self.x_avg - 0.5 * self.x_diff, self.p_avg - 0.5 * self.p_diff),
        )
    }

    /// `(x_A p_D - p_A x_D) / 2 hbar`, the geometric part of the cross-term phase.
    pub fn geometric_phase(&self, consts: &Constants) -> f64 {
        (self.x_avg * self.p_diff - self.p_avg * self.x_diff) / (2.0 * consts.hbar)
    }
}

/// Superposition of two equal-width Gaussian packets with coherence `c`
/// and relative phase `phi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CatState {
    pub a: GaussianPacket,
    pub b: GaussianPacket,
    pub c: f64,
    pub phi: f64,
}

impl CatState {
    pub fn new(a: GaussianPacket, b: GaussianPacket, c: f64, phi: f64) -> Result<Self> {
        let cat = Self { a, b, c, phi };
        cat.validate()?;
        Ok(cat)
    }

    /// The pure superposition `|x_a, p_a> + |x_b, p_b>` (c = 1, phi = 0).
    pub fn superposition(x_a: f64, p_a: f64, x_b: f64, p_b: f64, sigma: f64) -> Result<Self> {
        Self::new(GaussianPacket::new(x_a, p_a, sigma)?, GaussianPacket::new(x_b, p_b, sigma)?, 1.0, 0.0)
    }

    /// A lone packet, stored as coincident branches without coherence.
    ///
    /// Its unnormalized Wigner function is twice the packet's; use the
    /// trace-normalized evaluators when the absolute scale matters.
    pub fn single(packet: GaussianPacket) -> Self {
        Self { a: packet, b: packet, c: 0.0, phi: 0.0 }
    }

    pub fn validate(&self) -> Result<()> {
        for packet in [&self.a, &self.b] {
            GaussianPacket::new(packet.x, packet.p, packet.sigma)?;
        }
        require(self.a.sigma == self.b.sigma, "cat width", || {
            format!("branches must share sigma, got {} and {}", self.a.sigma, self.b.sigma)
        })?;
        require((0.0..=1.0).contains(&self.c), "coherence c", || format!("must lie in [0, 1], got {}", self.c))?;
        finite("phase phi", self.phi)
    }

    pub fn sigma(&self) -> f64 {
        self.a.sigma
    }

    pub fn descriptors(&self) -> CatDescriptors {
        CatDescriptors {
            x_avg: 0.5 * (self.a.x + self.b.x),
            x_diff: self.a.x - self.b.x,
            p_avg: 0.5 * (self.a.p + self.b.p),
            p_diff: self.a.p - self.b.p,
        }
    }

    /// Rebuilds a cat from descriptors, keeping width, coherence and phase.
    pub fn with_descriptors(&self, desc: &CatDescriptors) -> Self {
        let ((x_a, p_a), (x_b, p_b)) = desc.branch_centers();
        Self { a: GaussianPacket { x: x_a, p: p_a, ..self.a }, b: GaussianPacket { x: x_b, p: p_b, ..self.b }, ..*self }
    }

    pub fn free_evolve(&self, t: f64, tracer: &Tracer) -> Self {
        Self { a: self.a.free_evolve(t, tracer), b: self.b.free_evolve(t, tracer), ..*self }
    }

    /// Trace of the (unnormalized) density operator:
    /// `2 + 2 c cos(theta_0) exp(-x_D^2 / 4 sigma^2 - sigma^2 p_D^2 / 4 hbar^2)`
    /// with `theta_0 = phi + (x_A p_D - p_A x_D) / 2 hbar`.
    pub fn trace(&self, consts: &Constants) -> f64 {
        let d = self.descriptors();
        let s = self.sigma();
        let theta0 = self.phi + d.geometric_phase(consts);
        let overlap = (-(d.x_diff * d.x_diff) / (4.0 * s * s) - (s * d.p_diff / consts.hbar).powi(2) / 4.0).exp();
        2.0 + 2.0 * self.c * theta0.cos() * overlap
    }
}

pub fn cat_descriptors(cat: &CatState) -> CatDescriptors {
    cat.descriptors()
}

/// Moves both packet centers along their free trajectories `x -> x + p t / m`.
pub fn free_evolve_cat(cat: &CatState, t: f64, tracer: &Tracer) -> CatState {
    cat.free_evolve(t, tracer)
}
