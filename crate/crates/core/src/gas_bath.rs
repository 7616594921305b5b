//! Friction, diffusion and spectral density for a pointer in a classical gas.
//!
//! Wavevectors are in 1/m. `α = ħ²/(2mk_BT)` has units m², so `e^{−αp²}` is
//! dimensionless with `p` a wavevector. In those units the Maxwellian reads
//! `f_p = n₀(α/π)^{3/2} e^{−αp²}` with `∫ f_p d³p = n₀`.

use std::f64::consts::PI;

use crate::error::{require_positive, Error, Result};
use crate::quadrature::{integrate_to_infinity, Tolerance};
use crate::units::{derive_timescales, thermal_energy, GasConfig, PhysicalConstants, PointerConfig};

/// α = ħ²/(2mk_BT) (m²).
pub fn alpha(g: &GasConfig, c: &PhysicalConstants) -> f64 {
    c.hbar * c.hbar / (2.0 * g.mass * c.k_b * g.temperature)
}

/// Maxwellian wavevector distribution f_p (1/m³ per unit wavevector volume).
pub fn maxwell_distribution(g: &GasConfig, c: &PhysicalConstants, p: f64) -> f64 {
    let a = alpha(g, c);
    g.density * (a / PI).powf(1.5) * (-a * p * p).exp()
}

/// |φ(q)|² for the Gaussian potential φ(r) = φ₀ exp(−r²/a²), in (J·m³)².
pub fn potential_ft_sq(g: &GasConfig, q: f64) -> f64 {
    let a2 = g.range * g.range;
    PI.powi(3) * a2 * a2 * a2 * g.strength * g.strength * (-a2 * q * q / 2.0).exp()
}

/// Radial Fourier transform `φ(q) = (4π/q)∫ r sin(qr) φ(r) dr`, evaluated by
/// quadrature. Reference for [`potential_ft_sq`].
pub fn potential_ft_numeric(g: &GasConfig, q: f64, tol: Tolerance) -> Result<f64> {
    let a = g.range;
    if q == 0.0 {
        let e = integrate_to_infinity(|s: f64| 4.0 * PI * s * s * (-s * s).exp(), 0.0, tol)?;
        return Ok(g.strength * a.powi(3) * e.value);
    }
    // r = a·s
    let qa = q * a;
    let e = integrate_to_infinity(|s: f64| s * (qa * s).sin() * (-s * s).exp(), 0.0, tol)?;
    Ok(4.0 * PI / qa * g.strength * a.powi(3) * e.value)
}

/// Friction coefficient γ (1/s) by numerical quadrature over momentum transfer.
pub fn gamma_quadrature(p: &PointerConfig, g: &GasConfig, c: &PhysicalConstants) -> Result<f64> {
    g.validate()?;
    let a = alpha(g, c);
    let eta = g.mass / p.mass();
    let a2 = g.range * g.range;
    // integrate in s = q·q0 so the integrand is O(1)
    let q0 = 1.0 / (a2 / 2.0 + a / 4.0).sqrt();
    let e = integrate_to_infinity(
        |s: f64| {
            let q = s * q0;
            s.powi(3) * (-(a2 / 2.0 + a / 4.0) * q * q).exp()
        },
        0.0,
        Tolerance::relative(1e-12),
    )?;
    let integral = e.value * q0.powi(4) * PI.powi(3) * a2.powi(3) * g.strength * g.strength;
    let prefactor = g.density * eta / (2.0 * PI).powi(4) * (a / PI).sqrt() * 4.0 * g.mass * a
        / (3.0 * c.hbar.powi(3));
    Ok(prefactor * integral)
}

/// Closed forms of γ: the exact Gaussian integral and its `ϱ ≫ 1` limit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaClosed {
    pub exact: f64,
    pub large_varrho: f64,
    pub varrho: f64,
}

pub fn gamma_closed(p: &PointerConfig, g: &GasConfig, c: &PhysicalConstants) -> GammaClosed {
    let a = alpha(g, c);
    let eta = g.mass / p.mass();
    let varrho = 2.0 * g.range * g.range / a;
    let pa2 = g.strength * g.range * g.range;
    let exact = g.density * eta * (a / PI.powi(3)).sqrt() * g.mass / (3.0 * c.hbar.powi(3)) * pa2 * pa2 * varrho
        / (1.0 + varrho).powi(2);
    let eps_t = thermal_energy(c, g.temperature);
    let vbar = (3.0 * c.k_b * g.temperature / g.mass).sqrt();
    let large_varrho = (3.0 / (2.0 * PI.powi(3))).sqrt() / 16.0
        * g.density
        * eta
        * g.range
        * g.range
        * vbar
        * (g.strength / eps_t).powi(2);
    GammaClosed {
        exact,
        large_varrho,
        varrho,
    }
}

/// Gas-derived dimensionless ratios.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GasRatios {
    /// α (m²)
    pub alpha: f64,
    /// mass ratio m/M
    pub eta: f64,
    /// 2a²/α
    pub varrho: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GammaBackend {
    #[default]
    Closed,
    Quadrature,
}

/// Friction and diffusion coefficients of the one-dimensional Fokker–Planck
/// equation for the pointer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BathCoefficients {
    /// friction γ (1/s)
    pub gamma: f64,
    /// k-space diffusion D (1/(m²·s))
    pub diffusion: f64,
    /// spatial diffusion D_c (m²/s)
    pub spatial_diffusion: f64,
    /// K
    pub temperature: f64,
    /// pointer mass M (kg)
    pub mass: f64,
    pub tau_f: f64,
    /// γτ_f
    pub r_f: f64,
    pub constants: PhysicalConstants,
    /// present when derived from a gas
    pub gas: Option<GasRatios>,
}

impl BathCoefficients {
    /// Coefficients for a pointer in a gas.
    pub fn from_gas(
        p: &PointerConfig,
        g: &GasConfig,
        c: &PhysicalConstants,
        backend: GammaBackend,
    ) -> Result<Self> {
        g.validate()?;
        let closed = gamma_closed(p, g, c);
        let gamma = match backend {
            GammaBackend::Closed => closed.exact,
            GammaBackend::Quadrature => gamma_quadrature(p, g, c)?,
        };
        let ratios = GasRatios {
            alpha: alpha(g, c),
            eta: g.mass / p.mass(),
            varrho: closed.varrho,
        };
        let mut b = Self::from_friction(p, c, gamma, g.temperature)?;
        // D = γ/(2αη), identical to Mγk_BT/ħ²
        b.diffusion = gamma / (2.0 * ratios.alpha * ratios.eta);
        b.gas = Some(ratios);
        b.check_identities()?;
        Ok(b)
    }

    /// Coefficients from a friction rate and a temperature.
    pub fn from_friction(p: &PointerConfig, c: &PhysicalConstants, gamma: f64, temperature: f64) -> Result<Self> {
        require_positive("gamma", gamma)?;
        require_positive("temperature", temperature)?;
        let tau_f = derive_timescales(p, c).tau_f;
        let m = p.mass();
        let b = Self {
            gamma,
            diffusion: m * gamma * c.k_b * temperature / (c.hbar * c.hbar),
            spatial_diffusion: c.k_b * temperature / (m * gamma),
            temperature,
            mass: m,
            tau_f,
            r_f: gamma * tau_f,
            constants: *c,
            gas: None,
        };
        b.check_identities()?;
        Ok(b)
    }

    /// Coefficients from γ and D directly; the temperature follows from
    /// `D = Mγk_BT/ħ²`.
    pub fn from_diffusion(p: &PointerConfig, c: &PhysicalConstants, gamma: f64, diffusion: f64) -> Result<Self> {
        require_positive("gamma", gamma)?;
        require_positive("diffusion", diffusion)?;
        let temperature = c.hbar * c.hbar * diffusion / (p.mass() * gamma * c.k_b);
        let mut b = Self::from_friction(p, c, gamma, temperature)?;
        b.diffusion = diffusion;
        Ok(b)
    }

    /// Same bath at a different friction rate, keeping the temperature.
    pub fn with_gamma(&self, gamma: f64) -> Result<Self> {
        require_positive("gamma", gamma)?;
        let c = &self.constants;
        let mut b = *self;
        b.gamma = gamma;
        b.diffusion = self.mass * gamma * c.k_b * self.temperature / (c.hbar * c.hbar);
        b.spatial_diffusion = c.k_b * self.temperature / (self.mass * gamma);
        b.r_f = gamma * self.tau_f;
        b.gas = None;
        Ok(b)
    }

    pub fn k_b_t(&self) -> f64 {
        self.constants.k_b * self.temperature
    }

    pub fn hbar_over_mass(&self) -> f64 {
        self.constants.hbar / self.mass
    }

    fn check_identities(&self) -> Result<()> {
        let from_dc = (self.mass * self.gamma / self.constants.hbar).powi(2) * self.spatial_diffusion;
        let rel = (from_dc - self.diffusion).abs() / self.diffusion;
        if !rel.is_finite() || rel > 1e-12 {
            return Err(Error::NonFinite(format!(
                "diffusion identity D = (M gamma/hbar)^2 D_c violated (relative gap {rel:e})"
            )));
        }
        Ok(())
    }
}

/// Spectral density of the classical gas density fluctuations at momentum
/// transfer `q` (1/m) and frequency `omega` (rad/s), per unit volume
/// (s/m³): `2π∫d³p/(2π)³ f_p δ(ω_{p+q} − ω_p − ω)`.
pub fn spectral_density(g: &GasConfig, c: &PhysicalConstants, q: f64, omega: f64) -> Result<f64> {
    if !(q.is_finite() && q != 0.0) {
        return Err(Error::invalid("q", format!("must be finite and non-zero, got {q}")));
    }
    let q = q.abs();
    let a = alpha(g, c);
    let m_over_hq = g.mass / (c.hbar * q);
    let pp = m_over_hq * omega - q / 2.0;
    Ok(2.0 * PI / (2.0 * PI).powi(3) * g.density * (a / PI).sqrt() * m_over_hq * (-a * pp * pp).exp())
}

/// Resonance values Q±(k,q) = η(q̂·k) − (q/2)(1 ± η).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentumShift {
    pub q_plus: f64,
    pub q_minus: f64,
}

/// `k_parallel` is the projection q̂·k (1/m).
pub fn momentum_shift(eta: f64, k_parallel: f64, q: f64) -> MomentumShift {
    MomentumShift {
        q_plus: eta * k_parallel - q / 2.0 * (1.0 + eta),
        q_minus: eta * k_parallel - q / 2.0 * (1.0 - eta),
    }
}

/// Transition-rate coefficient `(2π)^{-3} n₀√(α/π)(πm/qħ²) e^{−αQ²}` on both
/// branches, per unit volume in SI units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateCoefficient {
    pub shift: MomentumShift,
    pub plus: f64,
    pub minus: f64,
}

pub fn g_plus_coefficient(
    p: &PointerConfig,
    g: &GasConfig,
    c: &PhysicalConstants,
    k_parallel: f64,
    q: f64,
) -> Result<RateCoefficient> {
    if !(q.is_finite() && q > 0.0) {
        return Err(Error::invalid("q", format!("must be finite and > 0, got {q}")));
    }
    let a = alpha(g, c);
    let eta = g.mass / p.mass();
    let shift = momentum_shift(eta, k_parallel, q);
    let pre = g.density * (a / PI).sqrt() * PI * g.mass / (q * c.hbar * c.hbar) / (2.0 * PI).powi(3);
    Ok(RateCoefficient {
        shift,
        plus: pre * (-a * shift.q_plus * shift.q_plus).exp(),
        minus: pre * (-a * shift.q_minus * shift.q_minus).exp(),
    })
}

/// First-order mass-ratio expansion `e^{−αq²/4}(1 + αη(k∥q ∓ q²/2))` of
/// `e^{−αQ±²}`, returned as (plus, minus).
pub fn first_order_factors(alpha: f64, eta: f64, k_parallel: f64, q: f64) -> (f64, f64) {
    let base = (-alpha * q * q / 4.0).exp();
    (
        base * (1.0 + alpha * eta * (k_parallel * q - q * q / 2.0)),
        base * (1.0 + alpha * eta * (k_parallel * q + q * q / 2.0)),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn silver_air() -> (PointerConfig, GasConfig, PhysicalConstants) {
        (PointerConfig::silver_pointer(), GasConfig::air_bath(), PhysicalConstants::SI)
    }

    #[test]
    fn potential_special_points() {
        let g = GasConfig::air_bath();
        let p0 = potential_ft_sq(&g, 0.0);
        assert!((p0 - PI.powi(3) * g.range.powi(6) * g.strength.powi(2)).abs() <= 1e-15 * p0);
        let q = 2f64.sqrt() / g.range;
        assert!((potential_ft_sq(&g, q) - p0 / std::f64::consts::E).abs() < 1e-14 * p0);
    }

    #[test]
    fn quadrature_matches_closed() {
        let (p, g, c) = silver_air();
        let q = gamma_quadrature(&p, &g, &c).unwrap();
        let e = gamma_closed(&p, &g, &c).exact;
        assert!(((q - e) / e).abs() < 1e-10, "{q} {e}");
    }

    #[test]
    fn silver_air_gamma_in_band() {
        let (p, g, c) = silver_air();
        let gc = gamma_closed(&p, &g, &c);
        assert!(gc.exact > 1.25e9 && gc.exact < 5e9, "{}", gc.exact);
        assert!(gc.varrho > 1e3);
    }

    #[test]
    fn coefficient_identities() {
        let (p, g, c) = silver_air();
        let b = BathCoefficients::from_gas(&p, &g, &c, GammaBackend::Closed).unwrap();
        let alt = p.mass() * b.gamma * b.k_b_t() / (c.hbar * c.hbar);
        assert!(((alt - b.diffusion) / alt).abs() < 1e-13);
        assert!(b.r_f > 1e6 && b.r_f < 1e8);
    }

    #[test]
    fn spectral_peak_location() {
        let g = GasConfig::air_bath();
        let c = PhysicalConstants::SI;
        let q = 3e9;
        let w0 = c.hbar * q * q / (2.0 * g.mass);
        let at = spectral_density(&g, &c, q, w0).unwrap();
        assert!(at > spectral_density(&g, &c, q, 1.01 * w0).unwrap());
        assert!(at > spectral_density(&g, &c, q, 0.99 * w0).unwrap());
        assert!(spectral_density(&g, &c, 0.0, 1.0).is_err());
    }

    #[test]
    fn branches_at_zero_k() {
        let (p, g, c) = silver_air();
        let q = 1e10;
        let r = g_plus_coefficient(&p, &g, &c, 0.0, q).unwrap();
        let eta = g.mass / p.mass();
        assert!((r.shift.q_plus.powi(2) - q * q * (1.0 + eta).powi(2) / 4.0).abs() < 1e-12 * q * q);
        assert!(g_plus_coefficient(&p, &g, &c, 0.0, 0.0).is_err());
    }
}
