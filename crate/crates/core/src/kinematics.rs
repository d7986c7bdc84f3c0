//! A single hard-core collision between the tracer and one gas packet.
//!
//! With width matching `m sigma^2 = m_g sigma_g^2` the two-particle state
//! stays a product of Gaussian packets whose centers follow the classical
//! elastic-collision map. A cat state is updated branch by branch; the only
//! quantum remnants are the damping factor `c_bar` and the phase `phi_bar`.

use crate::error::{require, Result};
use crate::phase_space::{CatDescriptors, CatState, Constants, GaussianPacket};

/// Gas-to-tracer mass ratio `alpha = m_g / m`.
///
/// Zero is accepted as the infinitely heavy tracer limit.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct MassRatio(f64);

impl MassRatio {
    pub fn new(alpha: f64) -> Result<Self> {
        require(alpha.is_finite() && alpha >= 0.0, "mass ratio", || {
            format!("must be finite and non-negative, got {alpha}")
        })?;
        Ok(Self(alpha))
    }

    pub fn from_masses(gas_mass: f64, tracer_mass: f64) -> Result<Self> {
        Self::new(gas_mass / tracer_mass)
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// `(1 - alpha) / (1 + alpha)`, the contraction of branch differences.
    pub fn difference_contraction(self) -> f64 {
        (1.0 - self.0) / (1.0 + self.0)
    }
}

/// Center of the colliding gas packet.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CollisionSample {
    pub x_g: f64,
    pub p_g: f64,
}

impl CollisionSample {
    pub fn new(x_g: f64, p_g: f64) -> Self {
        Self { x_g, p_g }
    }
}

/// Post-collision centers of gas packet and tracer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassicalOutcome {
    pub x_g: f64,
    pub p_g: f64,
    pub x: f64,
    pub p: f64,
}

/// One-dimensional elastic collision map for the packet centers.
pub fn collide_classical(x_g: f64, p_g: f64, x: f64, p: f64, alpha: MassRatio) -> ClassicalOutcome {
    let a = alpha.0;
    let denom = 1.0 + a;
    ClassicalOutcome {
        x_g: (2.0 * x - (1.0 - a) * x_g) / denom,
        p_g: (2.0 * a * p - (1.0 - a) * p_g) / denom,
        x: (2.0 * a * x_g + (1.0 - a) * x) / denom,
        p: (2.0 * p_g + (1.0 - a) * p) / denom,
    }
}

/// Coherence factor `c_bar` left after the gas packet has (weakly)
/// measured which branch it hit. Independent of the collision sample.
pub fn coherence_damping(desc: &CatDescriptors, sigma: f64, alpha: MassRatio, consts: &Constants) -> f64 {
    let a = alpha.0;
    let position = desc.x_diff / sigma;
    let momentum = sigma * desc.p_diff / consts.hbar;
    (-a / (1.0 + a).powi(2) * (position * position + momentum * momentum)).exp()
}

/// Relative phase `phi_bar` imprinted by a collision with `sample`.
pub fn collision_phase(desc: &CatDescriptors, sample: &CollisionSample, alpha: MassRatio, consts: &Constants) -> f64 {
    let a = alpha.0;
    let numerator = 2.0 * a * (desc.x_avg * desc.p_diff - desc.x_diff * desc.p_avg)
        + (1.0 - a) * sample.p_g * desc.x_diff
        - a * (1.0 - a) * sample.x_g * desc.p_diff;
    numerator / ((1.0 + a).powi(2) * consts.hbar)
}

/// Applies one collision to both branches of `cat`.
///
/// Coherence composes multiplicatively and the phase additively, so
/// repeated application models successive independent collisions.
pub fn collide_cat(cat: &CatState, sample: &CollisionSample, alpha: MassRatio, consts: &Constants) -> CatState {
    let desc = cat.descriptors();
    let damping = coherence_damping(&desc, cat.sigma(), alpha, consts);
    let phase = collision_phase(&desc, sample, alpha, consts);
    let kick = |packet: &GaussianPacket| {
        let out = collide_classical(sample.x_g, sample.p_g, packet.x, packet.p, alpha);
        GaussianPacket { x: out.x, p: out.p, ..*packet }
    };
    CatState { a: kick(&cat.a), b: kick(&cat.b), c: cat.c * damping, phi: cat.phi + phase }
}

/// `phi + (x_A p_D - p_A x_D) / 2 hbar`, conserved by every collision.
pub fn phase_invariant(cat: &CatState, consts: &Constants) -> f64 {
    cat.phi + cat.descriptors().geometric_phase(consts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn alpha(a: f64) -> MassRatio {
        MassRatio::new(a).unwrap()
    }

    fn mixed_cat() -> (CatState, CollisionSample, MassRatio) {
        (CatState::superposition(15.0, 0.0, 0.0, 1.5, 4.0).unwrap(), CollisionSample::new(100.0, -1.0), alpha(0.04))
    }

    #[test]
    fn equal_masses_exchange() {
        let out = collide_classical(2.0, -1.0, 0.0, 0.0, alpha(1.0));
        assert_eq!(out, ClassicalOutcome { x_g: 0.0, p_g: 0.0, x: 2.0, p: -1.0 });
    }

    #[test]
    fn infinitely_heavy_tracer() {
        let (x, p, x_g, p_g) = (1.5, 0.3, 7.0, -0.8);
        let out = collide_classical(x_g, p_g, x, p, alpha(0.0));
        assert_eq!(out.x, x);
        assert_eq!(out.p, p + 2.0 * p_g);
        assert_eq!(out.x_g, 2.0 * x - x_g);
        assert_eq!(out.p_g, -p_g);
    }

    #[test]
    fn light_gas_collision_values() {
        let out = collide_classical(100.0, -1.0, 0.0, 0.0, alpha(0.04));
        assert_relative_eq!(out.x, 8.0 / 1.04, epsilon = 1e-12);
        assert_relative_eq!(out.p, -2.0 / 1.04, epsilon = 1e-12);
        assert_relative_eq!(out.x_g, -96.0 / 1.04, epsilon = 1e-12);
        assert_relative_eq!(out.p_g, 0.96 / 1.04, epsilon = 1e-12);
        assert!((out.x - 7.6923).abs() < 1e-4);
        assert!((out.x_g + 92.3077).abs() < 1e-4);
        assert_relative_eq!(out.p + out.p_g, -1.0, epsilon = 1e-15);
    }

    #[test]
    fn damping_limits() {
        let consts = Constants::default();
        let zero = CatDescriptors { x_avg: 3.0, x_diff: 0.0, p_avg: 1.0, p_diff: 0.0 };
        assert_eq!(coherence_damping(&zero, 2.0, alpha(0.5), &consts), 1.0);
        let far = CatDescriptors { x_avg: 0.0, x_diff: 40.0, p_avg: 0.0, p_diff: 2.0 };
        assert_eq!(coherence_damping(&far, 4.0, alpha(0.0), &consts), 1.0);
    }

    #[test]
    fn heavy_collision_damping_and_phase() {
        let consts = Constants::default();
        let (cat, sample, a) = mixed_cat();
        let desc = cat.descriptors();
        // mpmath, 30 digits
        assert_relative_eq!(coherence_damping(&desc, 4.0, a, &consts), 0.157_013_448_735_309_1, epsilon = 1e-14);
        assert_relative_eq!(collision_phase(&desc, &sample, a, &consts), -9.652_366_863_905_325, epsilon = 1e-12);
    }

    #[test]
    fn phase_limits() {
        let consts = Constants::default();
        let coincident = CatDescriptors { x_avg: 5.0, x_diff: 0.0, p_avg: 2.0, p_diff: 0.0 };
        let sample = CollisionSample::new(30.0, -0.7);
        assert_eq!(collision_phase(&coincident, &sample, alpha(0.1), &consts), 0.0);

        let position = CatDescriptors { x_avg: 2.0, x_diff: 15.0, p_avg: 0.3, p_diff: 0.0 };
        let sample = CollisionSample::new(10.0, -1.0);
        assert_eq!(collision_phase(&position, &sample, alpha(0.0), &consts), -15.0);
    }

    #[test]
    fn heavy_collision_cat_update() {
        let consts = Constants::default();
        let (cat, sample, a) = mixed_cat();
        let after = collide_cat(&cat, &sample, a, &consts);
        assert!((after.c - 0.1570).abs() < 5e-5);
        assert!((after.phi + 9.6524).abs() < 5e-5);
        let expect_a = collide_classical(100.0, -1.0, 15.0, 0.0, a);
        let expect_b = collide_classical(100.0, -1.0, 0.0, 1.5, a);
        assert_eq!((after.a.x, after.a.p), (expect_a.x, expect_a.p));
        assert_eq!((after.b.x, after.b.p), (expect_b.x, expect_b.p));
        assert_eq!(after.sigma(), 4.0);
    }

    #[test]
    fn coincident_branches_only_move() {
        let consts = Constants::default();
        let packet = GaussianPacket::new(1.0, 0.5, 3.0).unwrap();
        let cat = CatState::new(packet, packet, 0.7, 0.4).unwrap();
        let after = collide_cat(&cat, &CollisionSample::new(40.0, -0.3), alpha(0.01), &consts);
        assert_eq!((after.c, after.phi), (0.7, 0.4));
        assert_ne!(after.a.x, cat.a.x);
        assert_eq!(after.a, after.b);
    }

    #[test]
    fn equal_masses_merge_branches() {
        let consts = Constants::default();
        let cat = CatState::superposition(3.0, 0.5, -2.0, -0.25, 1.5).unwrap();
        let sample = CollisionSample::new(12.0, -0.9);
        let after = collide_cat(&cat, &sample, alpha(1.0), &consts);
        assert_eq!((after.a.x, after.a.p), (12.0, -0.9));
        assert_eq!(after.a, after.b);
        let d = cat.descriptors();
        let expected = (-(d.x_diff.powi(2) / 1.5f64.powi(2) + 1.5f64.powi(2) * d.p_diff.powi(2)) / 4.0).exp();
        assert_relative_eq!(after.c, expected, epsilon = 1e-15);
    }

    #[test]
    fn heavy_collision_invariant_preserved() {
        let consts = Constants::default();
        let (cat, sample, a) = mixed_cat();
        assert_eq!(phase_invariant(&cat, &consts), -11.25);
        let after = collide_cat(&cat, &sample, a, &consts);
        assert!((phase_invariant(&after, &consts) + 11.25).abs() < 1e-12);
    }

    #[test]
    fn rejects_negative_ratio() {
        assert!(MassRatio::new(-0.1).is_err());
        assert!(MassRatio::new(f64::NAN).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn rel(a: f64, b: f64, scale: f64) -> f64 {
            (a - b).abs() / scale.max(f64::MIN_POSITIVE)
        }

        proptest! {
            #[test]
            fn conserves_momentum_and_energy(
                x_g in -1e3..1e3f64, p_g in -10.0..10.0f64,
                x in -1e3..1e3f64, p in -10.0..10.0f64,
                a in 1e-5..2.0f64, m in 0.1..10.0f64,
            ) {
                let out = collide_classical(x_g, p_g, x, p, alpha(a));
                let m_g = a * m;
                prop_assert!(rel(out.p + out.p_g, p + p_g, p.abs() + p_g.abs()) < 1e-12);
                let before = p * p / (2.0 * m) + p_g * p_g / (2.0 * m_g);
                let after = out.p * out.p / (2.0 * m) + out.p_g * out.p_g / (2.0 * m_g);
                prop_assert!(rel(after, before, before) < 1e-12);
            }

            #[test]
            fn damping_ignores_sample(
                x_g in -1e3..1e3f64, p_g in -10.0..10.0f64,
                xd in -20.0..20.0f64, pd in -3.0..3.0f64,
            ) {
                let consts = Constants::default();
                let cat = CatState::superposition(xd, pd, 0.0, 0.0, 2.0).unwrap();
                let reference = coherence_damping(&cat.descriptors(), 2.0, alpha(0.01), &consts);
                let after = collide_cat(&cat, &CollisionSample::new(x_g, p_g), alpha(0.01), &consts);
                prop_assert_eq!(after.c, reference);
            }

            #[test]
            fn differences_contract_linearly(
                xa in -50.0..50.0f64, xb in -50.0..50.0f64,
                pa in -5.0..5.0f64, pb in -5.0..5.0f64,
                x_g in -1e3..1e3f64, p_g in -5.0..5.0f64, a in 1e-4..1.0f64,
            ) {
                let consts = Constants::default();
                let cat = CatState::superposition(xa, pa, xb, pb, 1.0).unwrap();
                let ratio = alpha(a);
                let before = cat.descriptors();
                let after = collide_cat(&cat, &CollisionSample::new(x_g, p_g), ratio, &consts).descriptors();
                let k = ratio.difference_contraction();
                let scale = 1.0 + xa.abs() + xb.abs() + x_g.abs();
                prop_assert!((after.x_diff - k * before.x_diff).abs() < 1e-12 * scale);
                prop_assert!((after.p_diff - k * before.p_diff).abs() < 1e-12 * (1.0 + pa.abs() + pb.abs() + p_g.abs()));
            }

            #[test]
            fn phase_invariant_survives_collisions(
                xa in -50.0..50.0f64, xb in -50.0..50.0f64,
                pa in -5.0..5.0f64, pb in -5.0..5.0f64, phi in -3.0..3.0f64,
                x_g in -1e3..1e3f64, p_g in -5.0..5.0f64, a in 1e-4..1.0f64,
            ) {
                let consts = Constants::default();
                let cat = CatState { phi, ..CatState::superposition(xa, pa, xb, pb, 1.0).unwrap() };
                let after = collide_cat(&cat, &CollisionSample::new(x_g, p_g), alpha(a), &consts);
                let scale = (1.0 + xa.abs() + xb.abs() + x_g.abs()) * (1.0 + pa.abs() + pb.abs() + p_g.abs());
                prop_assert!((phase_invariant(&after, &consts) - phase_invariant(&cat, &consts)).abs() < 1e-12 * scale);
            }
        }
    }
}
