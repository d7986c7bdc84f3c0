//! Phase-space (Wigner) representation of cat states.
//!
//! Everything that can be evaluated at a phase-space point implements
//! [`WignerFunction`]; grids, free-evolution shears, short-time mixtures and
//! collision ensembles compose through that trait.

use std::f64::consts::{PI, TAU};
use std::io::{self, Write};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{require, Error, Result};
use crate::phase_space::{CatState, Constants, Tracer};
use crate::quadrature::{uniform_breaks, Quadrature};

/// Smallest reference value accepted as a denominator by [`interference_metric`].
pub const ANTINODE_FLOOR: f64 = 1e-12;

/// A real phase-space density `W(x, p)`.
pub trait WignerFunction: Sync {
    fn eval(&self, x: f64, p: f64) -> f64;
}

impl<F> WignerFunction for F
where
    F: Fn(f64, f64) -> f64 + Sync,
{
    fn eval(&self, x: f64, p: f64) -> f64 {
        self(x, p)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhasePoint {
    pub x: f64,
    pub p: f64,
}

fn envelope(x: f64, p: f64, x0: f64, p0: f64, sigma: f64, hbar: f64) -> f64 {
    let u = (x - x0) / sigma;
    let v = sigma * (p - p0) / hbar;
    (-(u * u) - v * v).exp()
}

/// Argument of the interference cosine of `cat` at `(x, p)`.
pub fn cosine_argument(cat: &CatState, x: f64, p: f64, consts: &Constants) -> f64 {
    let d = cat.descriptors();
    cat.phi + d.geometric_phase(consts) + d.x_diff * (d.p_avg - p) / consts.hbar
        - d.p_diff * (d.x_avg - x) / consts.hbar
}

/// Closed-form Wigner function of the (unnormalized) cat density operator:
/// two Gaussian envelopes plus the oscillating cross term at the midpoint.
pub fn wigner_at(cat: &CatState, x: f64, p: f64, consts: &Constants) -> f64 {
    let s = cat.sigma();
    let h = consts.hbar;
    let d = cat.descriptors();
    let branches = envelope(x, p, cat.a.x, cat.a.p, s, h) + envelope(x, p, cat.b.x, cat.b.p, s, h);
    let cross = if cat.c == 0.0 {
        0.0
    } else {
        2.0 * cat.c * envelope(x, p, d.x_avg, d.p_avg, s, h) * cosine_argument(cat, x, p, consts).cos()
    };
    (branches + cross) / (PI * h)
}

/// [`wigner_at`] divided by the trace of the density operator.
pub fn normalized_wigner_at(cat: &CatState, x: f64, p: f64, consts: &Constants) -> f64 {
    wigner_at(cat, x, p, consts) / cat.trace(consts)
}

/// A cat state bound to its constants, usable as a [`WignerFunction`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CatWigner {
    pub cat: CatState,
    pub consts: Constants,
}

impl CatWigner {
    pub fn new(cat: CatState, consts: Constants) -> Self {
        Self { cat, consts }
    }
}

impl WignerFunction for CatWigner {
    fn eval(&self, x: f64, p: f64) -> f64 {
        wigner_at(&self.cat, x, p, &self.consts)
    }
}

/// Free evolution in the Schrödinger picture: `W_t(x, p) = W(x - p t / m, p)`.
#[derive(Debug, Clone, Copy)]
pub struct FreeEvolved<W> {
    pub inner: W,
    pub t: f64,
    pub mass: f64,
}

impl<W: WignerFunction> WignerFunction for FreeEvolved<W> {
    fn eval(&self, x: f64, p: f64) -> f64 {
        self.inner.eval(x - p * self.t / self.mass, p)
    }
}

pub fn shear<W: WignerFunction>(inner: W, t: f64, tracer: &Tracer) -> FreeEvolved<W> {
    FreeEvolved { inner, t, mass: tracer.mass }
}

pub fn free_evolve_wigner(cat: &CatState, t: f64, tracer: &Tracer, consts: &Constants) -> FreeEvolved<CatWigner> {
    shear(CatWigner::new(*cat, *consts), t, tracer)
}

/// Short-time state `(1 - R t) W_0 + R t W_1`.
#[derive(Debug, Clone, Copy)]
pub struct Mixture<A, B> {
    pub no_collision: A,
    pub one_collision: B,
    pub weight: f64,
}

impl<A: WignerFunction, B: WignerFunction> WignerFunction for Mixture<A, B> {
    fn eval(&self, x: f64, p: f64) -> f64 {
        (1.0 - self.weight) * self.no_collision.eval(x, p) + self.weight * self.one_collision.eval(x, p)
    }
}

/// Mixes the no-collision and one-collision Wigner functions with weight `R t`.
pub fn mixture_wigner<A, B>(w0: A, w1: B, rate: f64, t: f64) -> Result<Mixture<A, B>> {
    let weight = rate * t;
    if !(0.0..=1.0).contains(&weight) {
        return Err(Error::MixtureWeightOutOfRange(weight));
    }
    Ok(Mixture { no_collision: w0, one_collision: w1, weight })
}

/// Uniform average over an ensemble of cats, e.g. one per collision sample.
#[derive(Debug, Clone)]
pub struct EnsembleWigner {
    pub cats: Vec<CatState>,
    pub consts: Constants,
}

impl WignerFunction for EnsembleWigner {
    fn eval(&self, x: f64, p: f64) -> f64 {
        let sum: f64 = self.cats.iter().map(|cat| wigner_at(cat, x, p, &self.consts)).sum();
        sum / self.cats.len() as f64
    }
}

/// Rectangular phase-space lattice, endpoints included.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub p_min: f64,
    pub p_max: f64,
    pub nx: usize,
    pub np: usize,
}

impl GridSpec {
    pub fn new(nx: usize, np: usize, x_min: f64, x_max: f64, p_min: f64, p_max: f64) -> Result<Self> {
        let spec = Self { x_min, x_max, p_min, p_max, nx, np };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        require(self.nx >= 2 && self.np >= 2, "grid size", || {
            format!("need at least 2 nodes per axis, got {}x{}", self.nx, self.np)
        })?;
        let bounds = [self.x_min, self.x_max, self.p_min, self.p_max];
        require(bounds.iter().all(|b| b.is_finite()), "grid bounds", || {
            format!("bounds must be finite, got {bounds:?}")
        })?;
        require(self.x_max > self.x_min && self.p_max > self.p_min, "grid bounds", || {
            format!("max must exceed min on both axes, got {bounds:?}")
        })
    }

    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / (self.nx - 1) as f64
    }

    pub fn dp(&self) -> f64 {
        (self.p_max - self.p_min) / (self.np - 1) as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        if i + 1 == self.nx {
            self.x_max
        } else {
            self.x_min + i as f64 * self.dx()
        }
    }

    pub fn p(&self, j: usize) -> f64 {
        if j + 1 == self.np {
            self.p_max
        } else {
            self.p_min + j as f64 * self.dp()
        }
    }
}

/// Node values of a Wigner function, stored x-fastest (`values[i + nx * j]`).
#[derive(Debug, Clone, PartialEq)]
pub struct WignerGrid {
    pub spec: GridSpec,
    pub values: Vec<f64>,
}

impl WignerGrid {
    /// Evaluates `w` on every node. Rows are filled in parallel; each node
    /// depends only on its coordinates, so the output is deterministic.
    pub fn sample<W: WignerFunction + ?Sized>(spec: GridSpec, w: &W) -> Result<Self> {
        spec.validate()?;
        let mut values = vec![0.0; spec.nx * spec.np];
        values.par_chunks_mut(spec.nx).enumerate().for_each(|(j, row)| {
            let p = spec.p(j);
            for (i, v) in row.iter_mut().enumerate() {
                *v = w.eval(spec.x(i), p);
            }
        });
        Ok(Self { spec, values })
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i + self.spec.nx * j]
    }

    pub fn max_abs_difference(&self, other: &Self) -> f64 {
        assert_eq!(self.spec, other.spec, "grids must share a lattice");
        self.values.iter().zip(&other.values).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }

    /// Node-wise `self - other`.
    pub fn difference(&self, other: &Self) -> Self {
        assert_eq!(self.spec, other.spec, "grids must share a lattice");
        Self { spec: self.spec, values: self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect() }
    }

    /// Two-dimensional trapezoid rule over the grid.
    pub fn integral(&self) -> f64 {
        let (nx, np) = (self.spec.nx, self.spec.np);
        let weight = |k: usize, n: usize| if k == 0 || k + 1 == n { 0.5 } else { 1.0 };
        let mut total = 0.0;
        for j in 0..np {
            for i in 0..nx {
                total += weight(i, nx) * weight(j, np) * self.get(i, j);
            }
        }
        total * self.spec.dx() * self.spec.dp()
    }

    /// Writes the `x,p,w` CSV: one node per row, x varying fastest, 17
    /// significant digits.
    pub fn write_csv<Wr: Write>(&self, mut out: Wr) -> io::Result<()> {
        writeln!(out, "x,p,w")?;
        for j in 0..self.spec.np {
            let p = self.spec.p(j);
            for i in 0..self.spec.nx {
                writeln!(out, "{:.16e},{:.16e},{:.16e}", self.spec.x(i), p, self.get(i, j))?;
            }
        }
        out.flush()
    }
}

pub fn wigner_grid(cat: &CatState, spec: &GridSpec, consts: &Constants) -> Result<WignerGrid> {
    WignerGrid::sample(*spec, &CatWigner::new(*cat, *consts))
}

/// Wigner transform `(1 / pi hbar) \int <x+y|rho|x-y> e^{-2ipy/hbar} dy`
/// of the cat density operator, built from the packet wavefunctions and
/// integrated numerically. Independent of the closed form in [`wigner_at`].
pub fn oracle_wigner_at(cat: &CatState, x: f64, p: f64, consts: &Constants) -> Result<f64> {
    let h = consts.hbar;
    let s = cat.sigma();
    let cross = Complex64::from_polar(cat.c, cat.phi);
    let integrand = |y: f64| {
        let a_plus = cat.a.wavefunction_at(x + y, consts);
        let b_plus = cat.b.wavefunction_at(x + y, consts);
        let a_minus = cat.a.wavefunction_at(x - y, consts).conj();
        let b_minus = cat.b.wavefunction_at(x - y, consts).conj();
        let kernel = a_plus * a_minus + b_plus * b_minus + cross * a_plus * b_minus + cross.conj() * b_plus * a_minus;
        (kernel * Complex64::from_polar(1.0, -2.0 * p * y / h)).re
    };
    // The diagonal terms peak at y = 0, the cross terms at y = +-x_D / 2.
    let half_sep = 0.5 * (cat.a.x - cat.b.x).abs();
    let (lo, hi) = (-half_sep - 10.0 * s, half_sep + 10.0 * s);
    let frequency = (2.0 * p.abs() + cat.a.p.abs() + cat.b.p.abs()) / h;
    let piece = if frequency > 0.0 { (TAU / frequency).min(0.5 * s) } else { 0.5 * s };
    let quad = Quadrature::with_tolerance(1e-9 * PI * h, 0.0);
    let integral = quad.integrate_with_breaks(integrand, &uniform_breaks(lo, hi, piece))?;
    Ok(integral.value / (PI * h))
}

/// Grid of [`oracle_wigner_at`] values.
pub fn wigner_oracle(cat: &CatState, spec: &GridSpec, consts: &Constants) -> Result<WignerGrid> {
    spec.validate()?;
    let nodes: Vec<(usize, usize)> = (0..spec.np).flat_map(|j| (0..spec.nx).map(move |i| (i, j))).collect();
    let values = nodes
        .par_iter()
        .map(|&(i, j)| oracle_wigner_at(cat, spec.x(i), spec.p(j), consts))
        .collect::<Result<Vec<f64>>>()?;
    Ok(WignerGrid { spec: *spec, values })
}

/// Interference antinode of `cat`: the point nearest to the midpoint
/// `(x_A, p_A)` where the cross-term cosine equals one.
///
/// Distances are measured in the scaled coordinates `(x / sigma, p sigma / hbar)`,
/// in which the midpoint envelope is isotropic, so the chosen point is the
/// highest fringe. For coincident branches the midpoint itself is returned.
pub fn antinode(cat: &CatState, consts: &Constants) -> PhasePoint {
    let d = cat.descriptors();
    let s = cat.sigma();
    let h = consts.hbar;
    // Gradient of the cosine argument in scaled coordinates.
    let gx = d.p_diff * s / h;
    let gp = -d.x_diff / s;
    let norm2 = gx * gx + gp * gp;
    if norm2 == 0.0 {
        return PhasePoint { x: d.x_avg, p: d.p_avg };
    }
    let theta0 = cat.phi + d.geometric_phase(consts);
    let target = TAU * (theta0 / TAU).round();
    let step = (target - theta0) / norm2;
    PhasePoint { x: d.x_avg + s * step * gx, p: d.p_avg + h * step * gp / s }
}

/// `1 - w_test / w_ref` at a given phase-space point.
pub fn relative_change<R, T>(w_ref: &R, w_test: &T, point: PhasePoint) -> Result<f64>
where
    R: WignerFunction + ?Sized,
    T: WignerFunction + ?Sized,
{
    let reference = w_ref.eval(point.x, point.p);
    if reference.abs() < ANTINODE_FLOOR {
        return Err(Error::DegenerateAntinode(reference));
    }
    Ok(1.0 - w_test.eval(point.x, point.p) / reference)
}

/// Decoherence measured as the relative drop of `w_test` against `w_ref`
/// at the interference antinode of `cat0`. Values above one mean the
/// fringes of `w_test` are phase-inverted there.
pub fn interference_metric<R, T>(w_ref: &R, w_test: &T, cat0: &CatState, consts: &Constants) -> Result<f64>
where
    R: WignerFunction + ?Sized,
    T: WignerFunction + ?Sized,
{
    relative_change(w_ref, w_test, antinode(cat0, consts))
}
