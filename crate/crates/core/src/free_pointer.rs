//! Closed-form evolution of the pointer entangled with the spin, without a
//! bath. One-dimensional: only the deflection axis is modelled.
//!
//! The spin coupling is an instantaneous kick at `t = 0` leaving packet σ
//! centered at `σ·X̄`.

use std::f64::consts::{LN_2, PI};

use num_complex::Complex64;

use crate::units::{derive_timescales, PhysicalConstants, PointerConfig, Spin};

/// Complex spread ζ(t) = 1 + it/τ_f and ξ(t) = |ζ|².
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexSpread {
    pub zeta: Complex64,
    pub xi: f64,
}

impl ComplexSpread {
    pub fn at(tau_f: f64, t: f64) -> Self {
        let s = t / tau_f;
        Self {
            zeta: Complex64::new(1.0, s),
            xi: 1.0 + s * s,
        }
    }
}

/// Interference suppression exponent above which `p_int` should be read from
/// its log-magnitude rather than from the plain value.
pub const LOG_ENCODING_THRESHOLD: f64 = 30.0;

/// Position probability density split into the two spin components and their
/// interference term (all in 1/m).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbabilityComponents {
    pub p_up: f64,
    pub p_down: f64,
    /// may be negative
    pub p_int: f64,
    pub total: f64,
    /// ln|p_int|, finite even where `p_int` underflows
    pub ln_abs_int: f64,
    /// sign of the interference cosine
    pub sign_int: f64,
    /// Total exponent suppressing the interference term relative to an
    /// envelope `exp(−x²/2w²)` of the packet width `w`.
    pub suppression: f64,
}

impl ProbabilityComponents {
    /// Assembles the record from the log-densities of the two packets and the
    /// interference phase. `extra_damping` multiplies the interference by
    /// `exp(−extra_damping)`.
    pub(crate) fn assemble(
        ln_up: f64,
        ln_down: f64,
        phase: f64,
        extra_damping: f64,
        overlap_exponent: f64,
    ) -> Self {
        let p_up = ln_up.exp();
        let p_down = ln_down.exp();
        let c = phase.cos();
        let ln_abs_int = LN_2 + 0.5 * (ln_up + ln_down) - extra_damping + c.abs().ln();
        let sign_int = if c < 0.0 { -1.0 } else { 1.0 };
        let p_int = sign_int * ln_abs_int.exp();
        Self {
            p_up,
            p_down,
            p_int,
            total: p_up + p_down + p_int,
            ln_abs_int,
            sign_int,
            suppression: overlap_exponent + extra_damping,
        }
    }

    pub fn is_log_encoded(&self) -> bool {
        self.suppression > LOG_ENCODING_THRESHOLD
    }
}

/// ln of the normalized Gaussian `|a|²(2πw²)^{-1/2} exp(−(x−c)²/2w²)`.
pub(crate) fn ln_gaussian_component(amp: Complex64, width_sq: f64, x: f64, center: f64) -> f64 {
    let d = x - center;
    amp.norm_sqr().ln() - 0.5 * (2.0 * PI * width_sq).ln() - d * d / (2.0 * width_sq)
}

/// A free pointer with fixed physical constants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FreePointer {
    pub pointer: PointerConfig,
    pub constants: PhysicalConstants,
    pub tau_f: f64,
}

impl FreePointer {
    pub fn new(pointer: PointerConfig, constants: PhysicalConstants) -> Self {
        let tau_f = derive_timescales(&pointer, &constants).tau_f;
        Self {
            pointer,
            constants,
            tau_f,
        }
    }

    pub fn spread(&self, t: f64) -> ComplexSpread {
        ComplexSpread::at(self.tau_f, t)
    }

    /// Δ_f²(t) = Δ²(1 + (t/τ_f)²).
    pub fn free_spread(&self, t: f64) -> f64 {
        let d = self.pointer.delta();
        d * d * self.spread(t).xi
    }

    /// Packet of spin σ at position x, without the spin amplitude.
    pub fn wavepacket(&self, sigma: Spin, t: f64, x: f64) -> Complex64 {
        let d2 = self.pointer.delta().powi(2);
        let zeta = self.spread(t).zeta;
        let u = x - sigma.sign() * self.pointer.xbar();
        let norm = (2.0 * PI * d2).powf(-0.25);
        let exponent = -Complex64::new(u * u, 0.0) / (zeta * (4.0 * d2));
        zeta.sqrt().inv() * exponent.exp() * norm
    }

    /// ρ(σ,σ′; x, x′; t) = a*_{σ′} a_σ ψ_σ(x) ψ*_{σ′}(x′).
    pub fn density_matrix(&self, sigma: Spin, sigma_prime: Spin, t: f64, x: f64, x_prime: f64) -> Complex64 {
        let p = &self.pointer;
        let d2 = p.delta().powi(2);
        let cs = self.spread(t);
        let u = x - sigma.sign() * p.xbar();
        let v = x_prime - sigma_prime.sign() * p.xbar();
        let weight = p.amplitude(sigma_prime).conj() * p.amplitude(sigma);
        let exponent = -(cs.zeta.conj() * (u * u) + cs.zeta * (v * v)) / (4.0 * d2 * cs.xi);
        weight * exponent.exp() / (2.0 * PI * d2 * cs.xi).sqrt()
    }

    pub fn probability(&self, t: f64, x: f64) -> ProbabilityComponents {
        let p = &self.pointer;
        let w2 = self.free_spread(t);
        let ln_up = ln_gaussian_component(p.amp_plus(), w2, x, p.xbar());
        let ln_down = ln_gaussian_component(p.amp_minus(), w2, x, -p.xbar());
        let phase = p.xbar() * x * t / (w2 * self.tau_f) + p.phi_minus() - p.phi_plus();
        let overlap = p.xbar().powi(2) / (2.0 * w2);
        ProbabilityComponents::assemble(ln_up, ln_down, phase, 0.0, overlap)
    }

    /// Ω_int = X̄·x/(Δ²τ_f), the rate at which the interference phase at the
    /// observation point x advances for t ≪ τ_f.
    pub fn interference_frequency(&self, x: f64) -> f64 {
        self.pointer.xbar() * x / (self.pointer.delta().powi(2) * self.tau_f)
    }

    /// Exact ∫ P(x) dx including the overlap of the two packets:
    /// `1 + 2|a₊||a₋|cos(φ₊−φ₋)exp(−X̄²/2Δ²)`.
    pub fn total_probability(&self) -> f64 {
        let p = &self.pointer;
        let overlap = (-p.xbar().powi(2) / (2.0 * p.delta().powi(2))).exp();
        1.0 + 2.0 * p.amp_plus().norm() * p.amp_minus().norm() * (p.phi_plus() - p.phi_minus()).cos() * overlap
    }
}
