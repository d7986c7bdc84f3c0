//! Small-parameter limits and exact identities of the closed forms.

use colldeco_core::engine::{
    momentum_decoherence_from_parameter, position_coherence_after, position_decoherence_from_parameter,
    sine_gauss_integral, sine_gauss_integral_quadrature,
};
use colldeco_core::quadrature::{uniform_breaks, Quadrature};
use colldeco_core::special::dawson;
use proptest::prelude::*;

#[test]
fn time_average_identity() {
    let quad = Quadrature::with_tolerance(1e-14, 1e-13);
    for r in [0.1, 0.5, 1.0, 2.0, 3.0] {
        let integral = quad.integrate_with_breaks(|w| w * dawson(w), &uniform_breaks(0.0, r, 0.25)).unwrap().value;
        let lhs = 2.0 / r * integral;
        assert!((lhs - (1.0 - dawson(r) / r)).abs() < 1e-8, "r={r}");
        assert!((lhs - momentum_decoherence_from_parameter(r)).abs() < 1e-8, "r={r}");
    }
}

#[test]
fn overshoot_peak() {
    let (s_max, peak) = (0..=60_000)
        .map(|i| i as f64 * 1e-4)
        .map(|s| (s, position_decoherence_from_parameter(s)))
        .fold((0.0, f64::MIN), |best, cur| if cur.1 > best.1 { cur } else { best });
    assert!((peak - 1.284_749_439_656_85).abs() < 1e-8);
    assert!((s_max - 3.004).abs() < 1e-3);
}

proptest! {
    #[test]
    fn complementarity(s in 0.0..50.0f64) {
        prop_assert!((position_coherence_after(s) + position_decoherence_from_parameter(s) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn kernel_is_odd(a in -100.0..100.0f64) {
        prop_assert_eq!(sine_gauss_integral(-a), -sine_gauss_integral(a));
    }

    #[test]
    fn kernel_routes_agree(a in -60.0..60.0f64) {
        prop_assert!((sine_gauss_integral(a) - sine_gauss_integral_quadrature(a).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn small_separation_is_quadratic(s in 1e-4..0.05f64) {
        let approx = s * s / 2.0;
        prop_assert!((position_decoherence_from_parameter(s) - approx).abs() / approx < 0.01);
    }

    #[test]
    fn short_horizon_is_quadratic(r in 1e-4..0.05f64) {
        let approx = 2.0 * r * r / 3.0;
        prop_assert!((momentum_decoherence_from_parameter(r) - approx).abs() / approx < 0.01);
    }

    #[test]
    fn momentum_loss_is_monotone(r in 0.0..40.0f64, dr in 1e-3..5.0f64) {
        prop_assert!(momentum_decoherence_from_parameter(r + dr) > momentum_decoherence_from_parameter(r));
        prop_assert!(momentum_decoherence_from_parameter(r + dr) < 1.0);
    }
}
