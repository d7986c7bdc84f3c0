//! Fixtures shared by the benchmarks: the standard cats, gases and grids.

use colldeco_core::{CatState, Constants, GasEnvironment, GridSpec, MassRatio, Tracer};

pub const SIGMA: f64 = 4.0;

pub fn tracer() -> Tracer {
    Tracer::new(1.0).expect("unit mass")
}

/// Position cat at +-20 with zero momentum.
pub fn position_cat() -> CatState {
    CatState::superposition(20.0, 0.0, -20.0, 0.0, SIGMA).expect("valid cat")
}

/// Momentum cat at +-1.2 with zero position separation.
pub fn momentum_cat() -> CatState {
    CatState::superposition(0.0, 1.2, 0.0, -1.2, SIGMA).expect("valid cat")
}

/// Cat with both separations non-zero, so no closed form applies.
pub fn skew_cat() -> CatState {
    CatState::superposition(15.0, 0.0, 0.0, 1.5, SIGMA).expect("valid cat")
}

/// Light width-matched gas, alpha = 1e-4.
pub fn light_gas(temperature: f64) -> GasEnvironment {
    GasEnvironment::width_matched(
        &tracer(),
        SIGMA,
        MassRatio::new(1e-4).expect("valid ratio"),
        temperature,
        1e-4,
        Constants::default(),
    )
    .expect("valid gas")
}

pub fn grid(n: usize) -> GridSpec {
    GridSpec::new(n, n, -35.0, 35.0, -1.0, 1.0).expect("valid grid")
}
