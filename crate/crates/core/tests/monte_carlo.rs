//! Monte-Carlo decoherence against the closed forms, determinism and the
//! horizon dependence of position and momentum cats.

use colldeco_core::engine::{momentum_decoherence_per_collision, position_decoherence_per_collision};
use colldeco_core::{
    mc_decoherence, mc_decoherence_with, CatState, Constants, Error, GasEnvironment, MassRatio, McEstimate, McOptions,
    Tracer,
};

const N: usize = 10_000;

fn tracer() -> Tracer {
    Tracer::new(1.0).unwrap()
}

fn light_gas(temperature: f64) -> GasEnvironment {
    GasEnvironment::width_matched(
        &tracer(),
        4.0,
        MassRatio::new(1e-4).unwrap(),
        temperature,
        1e-4,
        Constants::default(),
    )
    .unwrap()
}

fn position_cat() -> CatState {
    CatState::superposition(20.0, 0.0, -20.0, 0.0, 4.0).unwrap()
}

fn momentum_cat() -> CatState {
    CatState::superposition(0.0, 1.2, 0.0, -1.2, 4.0).unwrap()
}

fn combined_se(a: &McEstimate, b: &McEstimate) -> f64 {
    a.std_error.hypot(b.std_error)
}

#[test]
fn position_cat_matches_closed_form() {
    for (temperature, seed) in [(0.2, 1), (1.5, 2)] {
        let env = light_gas(temperature);
        let mc = mc_decoherence(&position_cat(), &env, &tracer(), 20.0, N, seed).unwrap();
        let analytic = position_decoherence_per_collision(40.0, &env);
        assert!(mc.phase.deviation_from(analytic) < 3.0, "T={temperature}: {:?} vs {analytic}", mc.phase);
    }
}

#[test]
fn momentum_cat_matches_closed_form() {
    let env = light_gas(0.5);
    let mc = mc_decoherence(&momentum_cat(), &env, &tracer(), 20.0, N, 3).unwrap();
    let analytic = momentum_decoherence_per_collision(2.4, &tracer(), 20.0, &env).unwrap();
    assert!(mc.phase.deviation_from(analytic) < 3.0, "{:?} vs {analytic}", mc.phase);
}

#[test]
fn estimators_agree_for_light_gas() {
    let env = light_gas(0.2);
    let mc = mc_decoherence(&position_cat(), &env, &tracer(), 20.0, N, 4).unwrap();
    let combined = mc.combined();
    assert!((mc.wigner.mean - combined.mean).abs() < 3.0 * combined_se(&mc.wigner, &combined), "{mc:?}");
    assert!((mc.damping - 0.990_051_813_553_839_7).abs() < 1e-12);
}

#[test]
fn heavy_collision_decoheres_fully() {
    let tracer = tracer();
    let cat = CatState::superposition(15.0, 0.0, 0.0, 1.5, 4.0).unwrap();
    let env =
        GasEnvironment::width_matched(&tracer, 4.0, MassRatio::new(0.04).unwrap(), 0.5, 1e-4, Constants::default())
            .unwrap();
    let mc = mc_decoherence(&cat, &env, &tracer, 20.0, N, 0).unwrap();
    let combined = mc.combined();
    // Thermal average of 1 - c_bar cos(Delta) by 2-D Gauss-Legendre quadrature.
    assert!(combined.deviation_from(0.999_097_230_158_495) < 3.0, "{combined:?}");
    assert!((combined.mean - 1.0).abs() < 0.005);
}

#[test]
fn independent_of_worker_count() {
    let env = light_gas(0.5);
    let run =
        |workers| mc_decoherence_with(&position_cat(), &env, &tracer(), 20.0, 5000, 99, McOptions { workers }).unwrap();
    let single = run(1);
    assert_eq!(single, run(3));
    assert_eq!(single, run(0));
    assert_eq!(single, mc_decoherence(&position_cat(), &env, &tracer(), 20.0, 5000, 99).unwrap());
    assert_ne!(single, run_seed(&env, 100));
}

fn run_seed(env: &GasEnvironment, seed: u64) -> colldeco_core::McDecoherence {
    mc_decoherence(&position_cat(), env, &tracer(), 20.0, 5000, seed).unwrap()
}

#[test]
fn position_cat_ignores_horizon() {
    let env = light_gas(0.5);
    let short = mc_decoherence(&position_cat(), &env, &tracer(), 20.0, N, 6).unwrap().phase;
    let long = mc_decoherence(&position_cat(), &env, &tracer(), 40.0, N, 7).unwrap().phase;
    assert!((short.mean - long.mean).abs() < 3.0 * combined_se(&short, &long), "{short:?} vs {long:?}");
}

#[test]
fn momentum_cat_grows_with_horizon() {
    let env = light_gas(0.5);
    let short = mc_decoherence(&momentum_cat(), &env, &tracer(), 10.0, N, 8).unwrap().phase;
    let long = mc_decoherence(&momentum_cat(), &env, &tracer(), 20.0, N, 9).unwrap().phase;
    assert!(long.mean - short.mean > 3.0 * combined_se(&short, &long));
    // Quadratic at small t: doubling the horizon roughly quadruples the loss.
    let ratio = long.mean / short.mean;
    assert!((3.0..4.5).contains(&ratio), "ratio {ratio}");
}

#[test]
fn coincident_branches_keep_their_phase() {
    let tracer = tracer();
    let env =
        GasEnvironment::width_matched(&tracer, 4.0, MassRatio::new(1e-12).unwrap(), 0.5, 1e-4, Constants::default())
            .unwrap();
    let cat = CatState::superposition(0.0, 0.0, 0.0, 0.0, 4.0).unwrap();
    let mc = mc_decoherence(&cat, &env, &tracer, 20.0, 1000, 10).unwrap();
    assert_eq!(mc.phase.mean, 0.0);
    assert_eq!(mc.phase.std_error, 0.0);
    assert_eq!(mc.damping, 1.0);
    assert!(mc.wigner.mean.abs() < 1e-9);
}

#[test]
fn rejects_bad_requests() {
    let env = light_gas(0.5);
    assert_eq!(
        mc_decoherence(&position_cat(), &env, &tracer(), 20.0, 1, 0).unwrap_err(),
        Error::TooFewSamples { min: 2, got: 1 }
    );
    let incoherent = CatState { c: 0.0, ..position_cat() };
    assert!(mc_decoherence(&incoherent, &env, &tracer(), 20.0, 100, 0).is_err());
    assert!(mc_decoherence(&position_cat(), &env, &tracer(), 0.0, 100, 0).is_err());
}
