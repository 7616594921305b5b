//! Physical configuration types, constants and the dimensionless scaling used
//! by the numerical oracles.
//!
//! Everything in the library is SI. Wavevectors (the `k`, `q`, `p` arguments
//! throughout) are in 1/m, not kg·m/s: a momentum is `ħ·k`.

use num_complex::Complex64;

use crate::error::{require_non_negative, require_positive, Error, Result};

/// Tolerance on `|a₊|² + |a₋|² = 1`.
pub const NORMALIZATION_TOL: f64 = 1e-12;

/// Reduced Planck constant and Boltzmann constant.
///
/// Defaults are the exact SI values. Tests may substitute other values to
/// check formula identities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    /// J·s
    pub hbar: f64,
    /// J/K
    pub k_b: f64,
}

impl PhysicalConstants {
    pub const SI: PhysicalConstants = PhysicalConstants {
        hbar: 1.054_571_817e-34,
        k_b: 1.380_649e-23,
    };

    pub fn new(hbar: f64, k_b: f64) -> Result<Self> {
        require_positive("hbar", hbar)?;
        require_positive("k_b", k_b)?;
        Ok(Self { hbar, k_b })
    }
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::SI
    }
}

/// The measuring pointer and the spin state it is entangled with.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointerConfig {
    mass: f64,
    delta: f64,
    xbar: f64,
    amp_plus: Complex64,
    amp_minus: Complex64,
    phi_plus: f64,
    phi_minus: f64,
}

impl PointerConfig {
    /// Builds a pointer from complex spin amplitudes, which must be normalized.
    pub fn new(
        mass: f64,
        delta: f64,
        xbar: f64,
        amp_plus: Complex64,
        amp_minus: Complex64,
    ) -> Result<Self> {
        require_positive("pointer.mass", mass)?;
        require_positive("pointer.delta", delta)?;
        require_non_negative("pointer.xbar", xbar)?;
        if !(amp_plus.is_finite() && amp_minus.is_finite()) {
            return Err(Error::invalid("pointer amplitudes", "must be finite"));
        }
        let norm = amp_plus.norm_sqr() + amp_minus.norm_sqr();
        if (norm - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::invalid(
                "pointer amplitudes",
                format!("|a+|^2 + |a-|^2 = {norm}, expected 1"),
            ));
        }
        Ok(Self {
            mass,
            delta,
            xbar,
            amp_plus,
            amp_minus,
            phi_plus: amp_plus.arg(),
            phi_minus: amp_minus.arg(),
        })
    }

    /// Builds a pointer from the spin-up population `|a₊|²` and the two phases.
    pub fn from_population(
        mass: f64,
        delta: f64,
        xbar: f64,
        population_plus: f64,
        phi_plus: f64,
        phi_minus: f64,
    ) -> Result<Self> {
        if !(0.0..=1.0).contains(&population_plus) {
            return Err(Error::invalid(
                "pointer.population_plus",
                format!("must lie in [0, 1], got {population_plus}"),
            ));
        }
        if !(phi_plus.is_finite() && phi_minus.is_finite()) {
            return Err(Error::invalid("pointer phases", "must be finite"));
        }
        let amp_plus = Complex64::from_polar(population_plus.sqrt(), phi_plus);
        let amp_minus = Complex64::from_polar((1.0 - population_plus).sqrt(), phi_minus);
        let mut cfg = Self::new(mass, delta, xbar, amp_plus, amp_minus)?;
        // keep the requested phases even when an amplitude vanishes
        cfg.phi_plus = phi_plus;
        cfg.phi_minus = phi_minus;
        Ok(cfg)
    }

    /// Silver-atom pointer: M = 1.8e-25 kg, Δ = 1 μm, X̄ = 1 cm, equal real
    /// amplitudes.
    pub fn silver_pointer() -> Self {
        Self::from_population(1.8e-25, 1e-6, 1e-2, 0.5, 0.0, 0.0)
            .expect("preset is valid")
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    /// Initial wave-packet spread Δ (m).
    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// Deflection X̄ accumulated during the spin coupling (m).
    pub fn xbar(&self) -> f64 {
        self.xbar
    }

    pub fn amp_plus(&self) -> Complex64 {
        self.amp_plus
    }

    pub fn amp_minus(&self) -> Complex64 {
        self.amp_minus
    }

    pub fn phi_plus(&self) -> f64 {
        self.phi_plus
    }

    pub fn phi_minus(&self) -> f64 {
        self.phi_minus
    }

    /// Amplitude for `sigma = ±1`.
    pub fn amplitude(&self, sigma: Spin) -> Complex64 {
        match sigma {
            Spin::Up => self.amp_plus,
            Spin::Down => self.amp_minus,
        }
    }

    pub fn with_mass(&self, mass: f64) -> Result<Self> {
        self.rebuild(mass, self.delta, self.xbar)
    }

    pub fn with_delta(&self, delta: f64) -> Result<Self> {
        self.rebuild(self.mass, delta, self.xbar)
    }

    pub fn with_xbar(&self, xbar: f64) -> Result<Self> {
        self.rebuild(self.mass, self.delta, xbar)
    }

    fn rebuild(&self, mass: f64, delta: f64, xbar: f64) -> Result<Self> {
        let mut cfg = Self::new(mass, delta, xbar, self.amp_plus, self.amp_minus)?;
        cfg.phi_plus = self.phi_plus;
        cfg.phi_minus = self.phi_minus;
        Ok(cfg)
    }
}

/// Spin projection σ = ±1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Spin {
    Up,
    Down,
}

impl Spin {
    pub fn sign(self) -> f64 {
        match self {
            Spin::Up => 1.0,
            Spin::Down => -1.0,
        }
    }

    pub fn flip(self) -> Spin {
        match self {
            Spin::Up => Spin::Down,
            Spin::Down => Spin::Up,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Spin::Up => "+",
            Spin::Down => "-",
        }
    }

    pub fn from_sign(sign: i32) -> Result<Spin> {
        match sign {
            1 => Ok(Spin::Up),
            -1 => Ok(Spin::Down),
            other => Err(Error::invalid("spin", format!("must be +1 or -1, got {other}"))),
        }
    }
}

/// Classical gas of field particles with a Gaussian pair potential
/// `φ(r) = φ₀ exp(−r²/a²)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GasConfig {
    /// particle mass m (kg)
    pub mass: f64,
    /// number density n₀ (1/m³)
    pub density: f64,
    /// temperature T (K)
    pub temperature: f64,
    /// interaction range a (m)
    pub range: f64,
    /// interaction strength φ₀ (J)
    pub strength: f64,
}

impl GasConfig {
    pub fn new(mass: f64, density: f64, temperature: f64, range: f64, strength: f64) -> Result<Self> {
        let cfg = Self {
            mass,
            density,
            temperature,
            range,
            strength,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        require_positive("gas.mass", self.mass)?;
        require_positive("gas.density", self.density)?;
        require_positive("gas.temperature", self.temperature)?;
        require_positive("gas.range", self.range)?;
        require_positive("gas.strength", self.strength)?;
        Ok(())
    }

    /// Air at room temperature: m = 4.8e-26 kg, n₀ = 2.5e25 m⁻³, T = 300 K,
    /// a = 1.75 Å, φ₀ = 50·ε_T with ε_T = 3k_BT/2.
    pub fn air_bath() -> Self {
        let temperature = 300.0;
        Self {
            mass: 4.8e-26,
            density: 2.5e25,
            temperature,
            range: 1.75e-10,
            strength: 50.0 * thermal_energy(&PhysicalConstants::SI, temperature),
        }
    }
}

/// Average thermal energy ε_T = 3k_BT/2 (J).
pub fn thermal_energy(c: &PhysicalConstants, temperature: f64) -> f64 {
    1.5 * c.k_b * temperature
}

/// Free quantum diffusion time τ_f = 2MΔ²/ħ (s).
pub fn derive_timescales(p: &PointerConfig, c: &PhysicalConstants) -> Timescales {
    Timescales {
        tau_f: 2.0 * p.mass * p.delta * p.delta / c.hbar,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Timescales {
    pub tau_f: f64,
}

/// Units used by the numerical oracles. A scaled quantity is the SI quantity
/// divided by its unit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scaling {
    /// s
    pub time_unit: f64,
    /// m
    pub length_unit: f64,
    /// 1/m
    pub momentum_unit: f64,
}

impl Scaling {
    /// Time in units of 1/γ, lengths in units of Δ, wavevectors in units of 1/Δ.
    pub fn natural(gamma: f64, delta: f64) -> Result<Self> {
        require_positive("gamma", gamma)?;
        require_positive("delta", delta)?;
        Ok(Self {
            time_unit: 1.0 / gamma,
            length_unit: delta,
            momentum_unit: 1.0 / delta,
        })
    }

    pub fn time_to_scaled(&self, t: f64) -> f64 {
        t / self.time_unit
    }

    pub fn time_to_si(&self, t: f64) -> f64 {
        t * self.time_unit
    }

    pub fn length_to_scaled(&self, x: f64) -> f64 {
        x / self.length_unit
    }

    pub fn length_to_si(&self, x: f64) -> f64 {
        x * self.length_unit
    }

    pub fn momentum_to_scaled(&self, k: f64) -> f64 {
        k / self.momentum_unit
    }

    pub fn momentum_to_si(&self, k: f64) -> f64 {
        k * self.momentum_unit
    }

    /// k-space diffusion coefficient D has units 1/(m²·s).
    pub fn diffusion_to_scaled(&self, d: f64) -> f64 {
        d * self.time_unit / (self.momentum_unit * self.momentum_unit)
    }

    pub fn diffusion_to_si(&self, d: f64) -> f64 {
        d * self.momentum_unit * self.momentum_unit / self.time_unit
    }

    pub fn rate_to_scaled(&self, r: f64) -> f64 {
        r * self.time_unit
    }

    pub fn rate_to_si(&self, r: f64) -> f64 {
        r / self.time_unit
    }

    /// ħ/M has units m²/s.
    pub fn hbar_over_mass_to_scaled(&self, v: f64) -> f64 {
        v * self.time_unit / (self.length_unit * self.length_unit)
    }

    pub fn hbar_over_mass_to_si(&self, v: f64) -> f64 {
        v * self.length_unit * self.length_unit / self.time_unit
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckStatus {
    Pass,
    Warn,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub status: CheckStatus,
    pub detail: String,
}

/// Outcome of [`validate_config`].
#[derive(Debug, Clone, PartialEq)]
pub struct Diagnostics {
    /// mass ratio m/M
    pub eta: f64,
    /// 2a²/α
    pub varrho: f64,
    /// n₀ λ³ with λ the gas thermal wavelength; classical statistics need ≪ 1
    pub occupancy: f64,
    pub checks: Vec<Check>,
}

impl Diagnostics {
    pub fn warnings(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.status == CheckStatus::Warn)
    }

    pub fn is_clean(&self) -> bool {
        self.warnings().next().is_none()
    }
}

/// Mass ratio above which the first-order expansion in m/M is not trusted.
pub const ETA_WARN: f64 = 0.5;
/// Below this ϱ the large-ϱ form of γ is not trusted.
pub const VARRHO_WARN: f64 = 10.0;
/// Above this occupancy the Maxwellian (classical) gas is not trusted.
pub const OCCUPANCY_WARN: f64 = 1e-2;

/// Checks the modelling assumptions for a pointer in a gas.
pub fn validate_config(
    p: &PointerConfig,
    g: &GasConfig,
    c: &PhysicalConstants,
) -> Result<Diagnostics> {
    g.validate()?;
    let eta = g.mass / p.mass;
    let alpha = c.hbar * c.hbar / (2.0 * g.mass * c.k_b * g.temperature);
    let varrho = 2.0 * g.range * g.range / alpha;
    // peak of f_p normalized to unit density: n₀ (α/π)^{3/2}
    let occupancy = g.density * (alpha / std::f64::consts::PI).powf(1.5);

    let mut checks = Vec::new();
    checks.push(if eta < ETA_WARN {
        Check {
            name: "mass_ratio",
            status: CheckStatus::Pass,
            detail: format!("eta = {eta:.4e}"),
        }
    } else {
        Check {
            name: "mass_ratio",
            status: CheckStatus::Warn,
            detail: format!("eta = {eta:.4e}: mass-ratio expansion invalid"),
        }
    });
    checks.push(if varrho > VARRHO_WARN {
        Check {
            name: "range_ratio",
            status: CheckStatus::Pass,
            detail: format!("varrho = {varrho:.4e}"),
        }
    } else {
        Check {
            name: "range_ratio",
            status: CheckStatus::Warn,
            detail: format!("varrho = {varrho:.4e}: large-varrho form of gamma inaccurate"),
        }
    });
    checks.push(if occupancy < OCCUPANCY_WARN {
        Check {
            name: "classical_gas",
            status: CheckStatus::Pass,
            detail: format!("occupancy = {occupancy:.4e}"),
        }
    } else {
        Check {
            name: "classical_gas",
            status: CheckStatus::Warn,
            detail: format!("occupancy = {occupancy:.4e}: gas is not classical"),
        }
    });
    Ok(Diagnostics {
        eta,
        varrho,
        occupancy,
        checks,
    })
}
