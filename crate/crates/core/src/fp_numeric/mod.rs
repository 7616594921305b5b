//! Independent numerical oracles for the closed forms: a Crank–Nicolson
//! solver for density slices, kernel quadrature, and FFT free evolution.
//!
//! Numerical work runs in scaled units (time in 1/γ, lengths in Δ,
//! wavevectors in 1/Δ); public entry points take and return SI values.

mod fft;
mod kernel;
mod solver;

pub use fft::{fft_free_evolve, fft_propagate, FreeEvolution};
pub use kernel::propagate_by_kernel;
pub use solver::{solve_to, solve_to_times, step_slice, SolverConfig, SolverRun};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fp_analytic::{BathModel, LogGaussianForm};
use crate::gas_bath::BathCoefficients;
use crate::units::{PhysicalConstants, PointerConfig, Scaling};

/// Relative magnitude allowed at the two ends of a slice.
pub const BOUNDARY_TOL: f64 = 1e-12;

/// Density slice ρ(K) at fixed relative wavevector `p` on a uniform K grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSlice {
    /// 1/m
    pub p: f64,
    /// uniform, 1/m
    pub k_grid: Vec<f64>,
    /// ρ(K, p) in m
    pub values: Vec<Complex64>,
    /// s
    pub t: f64,
}

impl GridSlice {
    pub fn spacing(&self) -> f64 {
        if self.k_grid.len() < 2 {
            0.0
        } else {
            self.k_grid[1] - self.k_grid[0]
        }
    }

    /// Riemann sum of the slice over K.
    pub fn trace(&self) -> Complex64 {
        self.values.iter().sum::<Complex64>() * self.spacing()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Largest end-point magnitude relative to the slice maximum.
    pub fn boundary_ratio(&self) -> f64 {
        let max = self.max_abs();
        if max == 0.0 || self.values.is_empty() {
            return 0.0;
        }
        let first = self.values[0].norm();
        let last = self.values[self.values.len() - 1].norm();
        first.max(last) / max
    }

    pub fn check_boundary(&self, limit: f64) -> Result<()> {
        let ratio = self.boundary_ratio();
        if ratio > limit {
            return Err(Error::BoundaryMass {
                boundary: ratio,
                limit,
                time: self.t,
            });
        }
        Ok(())
    }

    /// Samples a closed-form slice on the given grid.
    pub fn from_form(form: &LogGaussianForm, p: f64, k_grid: Vec<f64>) -> Self {
        let values = k_grid.iter().map(|&k| form.value(k, p)).collect();
        Self {
            p,
            k_grid,
            values,
            t: form.t,
        }
    }
}

/// Uniform grid of `n` points on `[−k_max, k_max]`.
pub fn symmetric_grid(k_max: f64, n: usize) -> Vec<f64> {
    crate::fit::linear_grid(-k_max, k_max, n)
}

/// Error norms of `candidate` against `reference`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorNorms {
    pub l2_rel: f64,
    pub linf_rel: f64,
    /// |trace(candidate) − trace(reference)| / |trace(reference)|
    pub trace_drift: f64,
}

pub fn compare(reference: &GridSlice, candidate: &GridSlice) -> Result<ErrorNorms> {
    if reference.values.len() != candidate.values.len() || reference.k_grid.len() != candidate.k_grid.len() {
        return Err(Error::GridMismatch(format!(
            "{} vs {} points",
            reference.values.len(),
            candidate.values.len()
        )));
    }
    let scale = reference
        .k_grid
        .iter()
        .map(|k| k.abs())
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE);
    for (a, b) in reference.k_grid.iter().zip(&candidate.k_grid) {
        if (a - b).abs() > 1e-12 * scale {
            return Err(Error::GridMismatch(format!("K grids differ ({a} vs {b})")));
        }
    }
    if reference.values.iter().chain(&candidate.values).any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("compared slice".into()));
    }
    let mut diff2 = 0.0;
    let mut ref2 = 0.0;
    let mut diff_inf: f64 = 0.0;
    let mut ref_inf: f64 = 0.0;
    for (r, c) in reference.values.iter().zip(&candidate.values) {
        let d = (c - r).norm();
        diff2 += d * d;
        ref2 += r.norm_sqr();
        diff_inf = diff_inf.max(d);
        ref_inf = ref_inf.max(r.norm());
    }
    let ratio = |num: f64, den: f64| if den == 0.0 { if num == 0.0 { 0.0 } else { f64::INFINITY } } else { num / den };
    let tr = reference.trace();
    Ok(ErrorNorms {
        l2_rel: ratio(diff2.sqrt(), ref2.sqrt()),
        linf_rel: ratio(diff_inf, ref_inf),
        trace_drift: ratio((candidate.trace() - tr).norm(), tr.norm()),
    })
}

/// Same physics expressed in scaled units: ħ = k_B = γ = Δ = 1.
pub fn scaled_model(model: &BathModel) -> Result<(BathModel, Scaling)> {
    let b = &model.bath;
    let p = &model.pointer;
    let scaling = Scaling::natural(b.gamma, p.delta())?;
    let v = scaling.hbar_over_mass_to_scaled(b.hbar_over_mass());
    let pointer = PointerConfig::new(
        1.0 / v,
        1.0,
        scaling.length_to_scaled(p.xbar()),
        p.amp_plus(),
        p.amp_minus(),
    )?;
    let constants = PhysicalConstants::new(1.0, 1.0)?;
    let bath = BathCoefficients::from_diffusion(&pointer, &constants, 1.0, scaling.diffusion_to_scaled(b.diffusion))?;
    Ok((BathModel::new(pointer, bath), scaling))
}

pub(crate) fn slice_to_si(s: GridSlice, scaling: &Scaling) -> GridSlice {
    GridSlice {
        p: scaling.momentum_to_si(s.p),
        k_grid: s.k_grid.iter().map(|&k| scaling.momentum_to_si(k)).collect(),
        // ρ(K, p) carries one power of length
        values: s.values.iter().map(|&v| v * scaling.length_unit).collect(),
        t: scaling.time_to_si(s.t),
    }
}
