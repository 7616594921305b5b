use std::f64::consts::PI;

use num_complex::Complex64;

use super::{scaled_model, slice_to_si, GridSlice};
use crate::error::{Error, Result};
use crate::fp_analytic::{ln_density_propagator, BathModel};
use crate::quadrature::{integrate_real_line, Tolerance};
use crate::units::Spin;

/// Propagates the initial slice to time `t` by K′-quadrature of the density
/// propagator. `k_grid` and `p` are in 1/m, `t` in s.
pub fn propagate_by_kernel(
    model: &BathModel,
    sigma: Spin,
    sigma_prime: Spin,
    p: f64,
    k_grid: &[f64],
    t: f64,
) -> Result<GridSlice> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::invalid("t", format!("must be finite and > 0, got {t}")));
    }
    let (scaled, scaling) = scaled_model(model)?;
    let ps = scaling.momentum_to_scaled(p);
    let ts = scaling.time_to_scaled(t);
    let tf = scaled.time_functions(ts)?;
    let init = scaled.initial_density(sigma, sigma_prime);
    let (d, v) = (scaled.bath.diffusion, scaled.bath.hbar_over_mass());
    // the initial slice has K-precision 2 (real part of quad_kk)
    let init_precision = 2.0 * init.quad_kk.re;
    let precision = tf.decay * tf.decay / tf.nu + init_precision;
    let width = 1.0 / precision.sqrt();
    let tol = Tolerance {
        rel: 1e-11,
        abs: 0.0,
        max_subdivisions: 4000,
    };
    let ks: Vec<f64> = k_grid.iter().map(|&k| scaling.momentum_to_scaled(k)).collect();
    // Gaussian center and modulus bound of the integrand at each K
    let mut centers = Vec::with_capacity(ks.len());
    let mut bounds = Vec::with_capacity(ks.len());
    for &k in &ks {
        let center = tf.decay * k / tf.nu / precision;
        let peak = (ln_density_propagator(&tf, d, v, ps, k, center)? + init.ln_value(center, ps)).re;
        centers.push(center);
        bounds.push(peak.exp() * width * PI.sqrt());
    }
    let global = bounds.iter().copied().fold(0.0, f64::max);
    let mut values = Vec::with_capacity(ks.len());
    for ((&k, &center), &bound) in ks.iter().zip(&centers).zip(&bounds) {
        // oscillation can cancel most of the modulus, so the absolute
        // target follows the modulus rather than the result
        let abs_floor = (1e-12 * bound).max(1e-16 * global);
        let e = integrate_real_line(
            |kp: f64| -> Complex64 {
                match ln_density_propagator(&tf, d, v, ps, k, kp) {
                    Ok(lj) => (lj + init.ln_value(kp, ps)).exp(),
                    Err(_) => Complex64::new(f64::NAN, 0.0),
                }
            },
            center,
            width,
            Tolerance { abs: abs_floor, ..tol },
        )?;
        values.push(e.value / (2.0 * PI));
    }
    let slice = GridSlice {
        p: ps,
        k_grid: ks,
        values,
        t: ts,
    };
    Ok(slice_to_si(slice, &scaling))
}
