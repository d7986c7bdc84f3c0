//! Dawson function and complementary error function.

/// Crossover between the power series and the asymptotic expansion.
const DAWSON_SERIES_LIMIT: f64 = 6.0;

/// Dawson's integral `F(x) = e^{-x^2} \int_0^x e^{t^2} dt`, accurate to
/// about 1e-15 relative.
///
/// Below the crossover the series of `\int_0^x e^{t^2} dt` has only
/// positive terms, so there is no cancellation; above it the asymptotic
/// expansion is cut at its smallest term, which is below 1e-15 there.
pub fn dawson(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    let ax = x.abs();
    let value = if ax < DAWSON_SERIES_LIMIT { dawson_series(ax) } else { dawson_asymptotic(ax) };
    value.copysign(x)
}

fn dawson_series(x: f64) -> f64 {
    let x2 = x * x;
    let mut power = x; // x^{2n+1} / n!
    let mut sum = x;
    let mut n = 0.0;
    loop {
        n += 1.0;
        power *= x2 / n;
        let term = power / (2.0 * n + 1.0);
        sum += term;
        if term <= 1e-17 * sum {
            break;
        }
    }
    (-x2).exp() * sum
}

fn dawson_asymptotic(x: f64) -> f64 {
    if x.is_infinite() {
        return 0.0;
    }
    let inv = 1.0 / (2.0 * x * x);
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut n = 0.0;
    loop {
        n += 1.0;
        let next = term * (2.0 * n - 1.0) * inv;
        if next >= term || next <= 1e-17 * sum {
            break;
        }
        term = next;
        sum += term;
    }
    sum / (2.0 * x)
}

/// Complementary error function.
pub fn erfc(x: f64) -> f64 {
    libm::erfc(x)
}
