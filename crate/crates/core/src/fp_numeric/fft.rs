use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::free_pointer::{FreePointer, ProbabilityComponents};
use crate::units::Spin;

/// Free packets of both spins on a uniform position grid.
#[derive(Debug, Clone, PartialEq)]
pub struct FreeEvolution {
    pub x_grid: Vec<f64>,
    pub up: Vec<Complex64>,
    pub down: Vec<Complex64>,
    pub t: f64,
}

impl FreeEvolution {
    pub fn packet(&self, sigma: Spin) -> &[Complex64] {
        match sigma {
            Spin::Up => &self.up,
            Spin::Down => &self.down,
        }
    }

    /// Probability terms assembled from the numerical packets.
    pub fn probability_terms(&self, free: &FreePointer) -> Vec<(f64, f64, f64)> {
        let ap = free.pointer.amp_plus();
        let am = free.pointer.amp_minus();
        self.up
            .iter()
            .zip(&self.down)
            .map(|(u, d)| {
                let pu = ap.norm_sqr() * u.norm_sqr();
                let pd = am.norm_sqr() * d.norm_sqr();
                let pi = 2.0 * (am.conj() * ap * u * d.conj()).re;
                (pu, pd, pi)
            })
            .collect()
    }

    pub fn compare_probability(&self, free: &FreePointer) -> f64 {
        let num = self.probability_terms(free);
        let mut diff = 0.0;
        let mut norm = 0.0;
        for (&x, (pu, pd, pi)) in self.x_grid.iter().zip(num) {
            let ex: ProbabilityComponents = free.probability(self.t, x);
            diff += (pu - ex.p_up).powi(2) + (pd - ex.p_down).powi(2) + (pi - ex.p_int).powi(2);
            norm += ex.p_up.powi(2) + ex.p_down.powi(2) + ex.p_int.powi(2);
        }
        (diff / norm).sqrt()
    }
}

/// Evolves the post-kick packets in k-space by exact phase multiplication:
/// the undisplaced initial Gaussian is multiplied by
/// `exp(−iħk²t/2M − iσX̄k)` and transformed back. `x_grid` must be uniform
/// and wide enough that the packets vanish at its ends (periodic wrap).
pub fn fft_free_evolve(free: &FreePointer, t: f64, x_grid: &[f64]) -> Result<FreeEvolution> {
    let up = evolve_packet(free, Spin::Up, t, x_grid)?;
    let down = evolve_packet(free, Spin::Down, t, x_grid)?;
    Ok(FreeEvolution {
        x_grid: x_grid.to_vec(),
        up,
        down,
        t,
    })
}

/// Free evolution of an arbitrary packet sampled on a uniform grid for a
/// time `t` (which may be negative).
pub fn fft_propagate(free: &FreePointer, psi: &[Complex64], x_grid: &[f64], t: f64) -> Result<Vec<Complex64>> {
    let dx = check_grid(x_grid)?;
    if psi.len() != x_grid.len() {
        return Err(Error::GridMismatch(format!("{} values on {} points", psi.len(), x_grid.len())));
    }
    let v = free.constants.hbar / free.pointer.mass();
    Ok(apply_kspace_phase(psi, dx, v, t, 0.0))
}

fn check_grid(x_grid: &[f64]) -> Result<f64> {
    let n = x_grid.len();
    if n < 8 {
        return Err(Error::invalid("x_grid", "need at least 8 points"));
    }
    let dx = x_grid[1] - x_grid[0];
    if !(dx > 0.0) || x_grid.windows(2).any(|w| ((w[1] - w[0]) - dx).abs() > 1e-9 * dx) {
        return Err(Error::invalid("x_grid", "must be uniform and increasing"));
    }
    Ok(dx)
}

/// Multiplies a packet sampled on `x_grid` by `exp(−i(ħk²t/2M + shift·k))`.
pub(crate) fn apply_kspace_phase(
    values: &[Complex64],
    dx: f64,
    hbar_over_mass: f64,
    t: f64,
    shift: f64,
) -> Vec<Complex64> {
    let n = values.len();
    let mut planner = FftPlanner::<f64>::new();
    let fwd = planner.plan_fft_forward(n);
    let inv = planner.plan_fft_inverse(n);
    let mut buf = values.to_vec();
    fwd.process(&mut buf);
    let dk = 2.0 * PI / (n as f64 * dx);
    for (m, v) in buf.iter_mut().enumerate() {
        let idx = if m <= n / 2 { m as f64 } else { m as f64 - n as f64 };
        let k = idx * dk;
        *v *= Complex64::from_polar(1.0 / n as f64, -(hbar_over_mass * k * k * t / 2.0 + shift * k));
    }
    inv.process(&mut buf);
    buf
}

fn evolve_packet(free: &FreePointer, sigma: Spin, t: f64, x_grid: &[f64]) -> Result<Vec<Complex64>> {
    let dx = check_grid(x_grid)?;
    let d2 = free.pointer.delta().powi(2);
    let norm = (2.0 * PI * d2).powf(-0.25);
    let initial: Vec<Complex64> = x_grid
        .iter()
        .map(|&x| Complex64::new(norm * (-x * x / (4.0 * d2)).exp(), 0.0))
        .collect();
    let v = free.constants.hbar / free.pointer.mass();
    let out = apply_kspace_phase(&initial, dx, v, t, sigma.sign() * free.pointer.xbar());
    let peak = out.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let edge = out[0].norm().max(out[out.len() - 1].norm());
    if edge > 1e-10 * peak {
        return Err(Error::BoundaryMass {
            boundary: edge / peak,
            limit: 1e-10,
            time: t,
        });
    }
    Ok(out)
}
