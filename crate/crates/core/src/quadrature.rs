//! Globally adaptive 7/15-point Gauss–Kronrod quadrature.

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];

// Gauss weights for XGK[1], XGK[3], XGK[5] and the center node.
const WG: [f64; 4] =
    [0.129_484_966_168_869_7, 0.279_705_391_489_276_7, 0.381_830_050_505_118_9, 0.417_959_183_673_469_4];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub error: f64,
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
}

fn kronrod<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64) -> Segment {
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let fc = f(center);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for (i, (&node, &weight)) in XGK[..7].iter().zip(&WGK[..7]).enumerate() {
        let dx = half * node;
        let pair = f(center - dx) + f(center + dx);
        kronrod += weight * pair;
        if i % 2 == 1 {
            gauss += WG[i / 2] * pair;
        }
    }
    Segment { lo, hi, value: kronrod * half, error: ((kronrod - gauss) * half).abs() }
}

/// Adaptive integrator; bisects the worst segment until the summed error
/// estimate meets `max(abs_tol, rel_tol * |I|)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_segments: usize,
}

impl Default for Quadrature {
    fn default() -> Self {
        Self { abs_tol: 1e-12, rel_tol: 1e-12, max_segments: 2000 }
    }
}

impl Quadrature {
    pub fn with_tolerance(abs_tol: f64, rel_tol: f64) -> Self {
        Self { abs_tol, rel_tol, ..Self::default() }
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F, lo: f64, hi: f64) -> Result<Integral> {
        self.integrate_with_breaks(f, &[lo, hi])
    }

    /// Integrates over `[breaks[0], breaks[last]]`, seeding the adaptive
    /// refinement with the given (sorted) interior breakpoints.
    pub fn integrate_with_breaks<F: Fn(f64) -> f64>(&self, f: F, breaks: &[f64]) -> Result<Integral> {
        assert!(breaks.len() >= 2, "need at least one interval");
        let mut segments: Vec<Segment> = breaks.windows(2).map(|w| kronrod(&f, w[0], w[1])).collect();
        loop {
            let value: f64 = segments.iter().map(|s| s.value).sum();
            let error: f64 = segments.iter().map(|s| s.error).sum();
            let tolerance = self.abs_tol.max(self.rel_tol * value.abs());
            if error <= tolerance {
                return Ok(Integral { value, error });
            }
            let (worst, _) =
                segments.iter().enumerate().max_by(|a, b| a.1.error.total_cmp(&b.1.error)).expect("non-empty");
            let seg = segments[worst];
            let mid = 0.5 * (seg.lo + seg.hi);
            // Segment too narrow to split further in floating point.
            let exhausted = mid <= seg.lo || mid >= seg.hi || seg.error <= 4.0 * f64::EPSILON * seg.value.abs();
            if exhausted || segments.len() >= self.max_segments {
                return Err(Error::QuadratureNonConvergence { error, tolerance });
            }
            segments[worst] = kronrod(&f, seg.lo, mid);
            segments.push(kronrod(&f, mid, seg.hi));
        }
    }
}

/// Evenly spaced breakpoints covering `[lo, hi]` with pieces no longer than `max_len`.
pub fn uniform_breaks(lo: f64, hi: f64, max_len: f64) -> Vec<f64> {
    let pieces = ((hi - lo) / max_len).ceil().max(1.0) as usize;
    let h = (hi - lo) / pieces as f64;
    (0..=pieces).map(|i| if i == pieces { hi } else { lo + i as f64 * h }).collect()
}
