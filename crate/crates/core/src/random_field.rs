//! Random-impulse bath: the pointer receives Gaussian displacement kicks at a
//! Poisson rate ν, each of width σ̄. Averaging over the kicks leaves a
//! Gaussian characteristic function `exp(−β²Δk²/2)` with β² = νσ̄²t, which
//! broadens the packets and damps the interference term.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, Poisson};
use rayon::prelude::*;

use crate::error::{require_non_negative, require_positive, Error, Result};
use crate::free_pointer::{ln_gaussian_component, ComplexSpread, ProbabilityComponents};
use crate::gas_bath::BathCoefficients;
use crate::units::{derive_timescales, PhysicalConstants, PointerConfig, Spin};

/// Published estimate of τ_int/τ_r for Δ = 1 μm, σ̄ = 0.1 μm, X̄ = 1 cm. The
/// damping-time formula evaluated at those values gives 2e-6 instead; both
/// are reported.
pub const QUOTED_TAU_INT_RATIO: f64 = 1e-10;

/// Samples per independently seeded Monte-Carlo chunk.
pub const MC_CHUNK: usize = 1024;

pub const DEFAULT_SEED: u64 = 0x5eed_2024;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RandomFieldParams {
    /// impulse rate (1/s)
    pub nu: f64,
    /// impulse width (m)
    pub sigma_bar: f64,
    /// oscillator frequency for the thermal width estimate (rad/s)
    pub omega0: Option<f64>,
}

impl RandomFieldParams {
    pub fn new(nu: f64, sigma_bar: f64) -> Result<Self> {
        require_positive("random_field.nu", nu)?;
        require_positive("random_field.sigma_bar", sigma_bar)?;
        Ok(Self {
            nu,
            sigma_bar,
            omega0: None,
        })
    }

    pub fn with_omega0(mut self, omega0: f64) -> Result<Self> {
        require_positive("random_field.omega0", omega0)?;
        self.omega0 = Some(omega0);
        Ok(self)
    }

    /// Impulse width from thermal equilibrium at temperature `T`, see
    /// [`sigma_from_thermal`].
    pub fn thermal(p: &PointerConfig, c: &PhysicalConstants, nu: f64, temperature: f64, omega0: Option<f64>) -> Result<Self> {
        let sigma = sigma_from_thermal(c, p.mass(), nu, temperature, omega0)?;
        let rf = Self::new(nu, sigma)?;
        match omega0 {
            Some(w) => rf.with_omega0(w),
            None => Ok(rf),
        }
    }

    pub fn validate(&self) -> Result<()> {
        require_positive("random_field.nu", self.nu)?;
        require_positive("random_field.sigma_bar", self.sigma_bar)?;
        if let Some(w) = self.omega0 {
            require_positive("random_field.omega0", w)?;
        }
        Ok(())
    }

    /// τ_r = 1/ν.
    pub fn tau_r(&self) -> f64 {
        1.0 / self.nu
    }
}

/// β²(t) = νσ̄²t.
pub fn beta_sq(rf: &RandomFieldParams, t: f64) -> f64 {
    rf.nu * rf.sigma_bar * rf.sigma_bar * t
}

/// Δ_β²(t) = Δ²ξ(t) + β²(t).
pub fn broadened_width_sq(p: &PointerConfig, c: &PhysicalConstants, rf: &RandomFieldParams, t: f64) -> f64 {
    let tau_f = derive_timescales(p, c).tau_f;
    p.delta().powi(2) * ComplexSpread::at(tau_f, t).xi + beta_sq(rf, t)
}

/// Averaged density matrix ρ̄(σ,σ′; x, x′; t) along the deflection axis.
pub fn rf_density_matrix(
    p: &PointerConfig,
    c: &PhysicalConstants,
    rf: &RandomFieldParams,
    t: f64,
    x: f64,
    x_prime: f64,
    sigma: Spin,
    sigma_prime: Spin,
) -> Result<Complex64> {
    require_non_negative("t", t)?;
    let d2 = p.delta().powi(2);
    let tau_f = derive_timescales(p, c).tau_f;
    let zeta = ComplexSpread::at(tau_f, t).zeta;
    let b2 = beta_sq(rf, t);
    let width = broadened_width_sq(p, c, rf, t);
    let om = x - sigma.sign() * p.xbar();
    let om_p = x_prime - sigma_prime.sign() * p.xbar();
    let spread = (om_p - om).powi(2) * b2 / (2.0 * d2);
    let exponent = -(zeta * (om_p * om_p) + zeta.conj() * (om * om) + spread) / (4.0 * width);
    let weight = p.amplitude(sigma_prime).conj() * p.amplitude(sigma);
    Ok(weight * exponent.exp() / (2.0 * PI * width).sqrt())
}

/// Position density with packets of width Δ_β² and interference damped by
/// `exp(−g)`, g from [`rf_damping_full`].
pub fn rf_probability(p: &PointerConfig, c: &PhysicalConstants, rf: &RandomFieldParams, t: f64, x: f64) -> Result<ProbabilityComponents> {
    require_non_negative("t", t)?;
    let tau_f = derive_timescales(p, c).tau_f;
    let w2 = broadened_width_sq(p, c, rf, t);
    let ln_up = ln_gaussian_component(p.amp_plus(), w2, x, p.xbar());
    let ln_down = ln_gaussian_component(p.amp_minus(), w2, x, -p.xbar());
    let phase = x * p.xbar() * t / (w2 * tau_f) + p.phi_minus() - p.phi_plus();
    let g = rf_damping_full(p, c, rf, t)?;
    let overlap = p.xbar().powi(2) / (2.0 * w2);
    Ok(ProbabilityComponents::assemble(ln_up, ln_down, phase, g, overlap))
}

/// Damping exponent with the free spreading dropped (ξ = 1):
/// `g = ½(X̄/Δ)²·s/(1+s)`, s = (σ̄/Δ)²(t/τ_r).
pub fn rf_damping(p: &PointerConfig, rf: &RandomFieldParams, t: f64) -> Result<f64> {
    require_non_negative("t", t)?;
    let d2 = p.delta().powi(2);
    let s = beta_sq(rf, t) / d2;
    Ok(0.5 * p.xbar().powi(2) / d2 * s / (1.0 + s))
}

/// Damping exponent `X̄²(β²/Δ²)/(2Δ_β²)` keeping ξ(t).
pub fn rf_damping_full(p: &PointerConfig, c: &PhysicalConstants, rf: &RandomFieldParams, t: f64) -> Result<f64> {
    require_non_negative("t", t)?;
    let d2 = p.delta().powi(2);
    let b2 = beta_sq(rf, t);
    Ok(p.xbar().powi(2) * (b2 / d2) / (2.0 * broadened_width_sq(p, c, rf, t)))
}

/// Saturation value ½(X̄/Δ)² of [`rf_damping`].
pub fn rf_saturation(p: &PointerConfig) -> f64 {
    0.5 * (p.xbar() / p.delta()).powi(2)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RandomFieldTimescales {
    pub tau_r: f64,
    /// interference damping time 2τ_r(Δ/X̄)²(Δ/σ̄)²
    pub tau_int: f64,
    /// time for the broadening to reach the deflection, τ_r(X̄/σ̄)²
    pub t_bluer: f64,
}

impl RandomFieldTimescales {
    pub fn tau_int_ratio(&self) -> f64 {
        self.tau_int / self.tau_r
    }

    pub fn t_bluer_ratio(&self) -> f64 {
        self.t_bluer / self.tau_r
    }
}

pub fn rf_timescales(p: &PointerConfig, rf: &RandomFieldParams) -> RandomFieldTimescales {
    let tau_r = rf.tau_r();
    let d = p.delta();
    RandomFieldTimescales {
        tau_r,
        tau_int: 2.0 * tau_r * (d / p.xbar()).powi(2) * (d / rf.sigma_bar).powi(2),
        t_bluer: tau_r * (p.xbar() / rf.sigma_bar).powi(2),
    }
}

/// Thermal impulse width. Classical: σ̄² = 2k_BT/(Mν²). With an oscillator
/// frequency ω₀ the thermal energy k_BT is replaced by ħω₀/(e^{ħω₀/k_BT}−1).
pub fn sigma_from_thermal(c: &PhysicalConstants, mass: f64, nu: f64, temperature: f64, omega0: Option<f64>) -> Result<f64> {
    require_positive("mass", mass)?;
    require_positive("nu", nu)?;
    require_positive("temperature", temperature)?;
    let kt = c.k_b * temperature;
    let energy = match omega0 {
        None => kt,
        Some(w) => {
            require_positive("omega0", w)?;
            let r = c.hbar * w / kt;
            kt * r / r.exp_m1()
        }
    };
    Ok((2.0 * energy / (mass * nu * nu)).sqrt())
}

/// The two forms of the linear-in-time damping term: the Fokker–Planck one
/// `2D(2Δ/(γτ_f))²t` and the random-impulse one `(σ̄²/Δ²)(t/τ_r)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearTermPair {
    pub fokker_planck: f64,
    pub random_field: f64,
}

impl LinearTermPair {
    pub fn rel_diff(&self) -> f64 {
        (self.fokker_planck - self.random_field).abs() / self.fokker_planck.abs()
    }
}

/// Evaluates both linear terms at time `t` with ν = γ and the classical
/// thermal width at the bath temperature.
pub fn linear_term_pair(p: &PointerConfig, bath: &BathCoefficients, t: f64) -> Result<LinearTermPair> {
    let d = p.delta();
    let fokker_planck = 2.0 * bath.diffusion * (2.0 * d / (bath.gamma * bath.tau_f)).powi(2) * t;
    let sigma = sigma_from_thermal(&bath.constants, bath.mass, bath.gamma, bath.temperature, None)?;
    let rf = RandomFieldParams::new(bath.gamma, sigma)?;
    let random_field = (rf.sigma_bar / d).powi(2) * t / rf.tau_r();
    Ok(LinearTermPair {
        fokker_planck,
        random_field,
    })
}

/// Sampled accumulated displacements x(t) = Σᵢ xᵢ, with a Poisson(νt) number
/// of N(0, σ̄²) impulses per sample.
#[derive(Debug, Clone, PartialEq)]
pub struct RandomWalkEnsemble {
    pub n_samples: usize,
    pub seed: u64,
    pub t: f64,
    pub samples: Vec<f64>,
}

impl RandomWalkEnsemble {
    /// Chunk `i` draws from ChaCha8 seeded with `seed` on stream `i`, so the
    /// samples do not depend on the thread count.
    pub fn generate(rf: &RandomFieldParams, t: f64, n_samples: usize, seed: u64) -> Result<Self> {
        rf.validate()?;
        require_non_negative("t", t)?;
        if n_samples == 0 {
            return Err(Error::invalid("n_samples", "must be at least 1"));
        }
        let mean_count = rf.nu * t;
        let normal = Normal::new(0.0, rf.sigma_bar).map_err(|e| Error::invalid("random_field.sigma_bar", e.to_string()))?;
        let poisson = if mean_count > 0.0 {
            Some(Poisson::new(mean_count).map_err(|e| Error::invalid("nu*t", e.to_string()))?)
        } else {
            None
        };
        let n_chunks = n_samples.div_ceil(MC_CHUNK);
        let chunks: Vec<Vec<f64>> = (0..n_chunks)
            .into_par_iter()
            .map(|i| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(i as u64);
                let len = MC_CHUNK.min(n_samples - i * MC_CHUNK);
                (0..len)
                    .map(|_| {
                        let count = poisson.map_or(0, |d| d.sample(&mut rng) as u64);
                        (0..count).map(|_| normal.sample(&mut rng)).sum()
                    })
                    .collect()
            })
            .collect();
        Ok(Self {
            n_samples,
            seed,
            t,
            samples: chunks.concat(),
        })
    }

    pub fn mean(&self) -> MeanEstimate {
        let (s, s2) = pairwise_sum(&self.samples, |x| (x, x * x));
        let n = self.n_samples as f64;
        let mean = s / n;
        let var = (s2 / n - mean * mean).max(0.0) * n / (n - 1.0).max(1.0);
        MeanEstimate {
            mean,
            stderr: (var / n).sqrt(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanEstimate {
    pub mean: f64,
    pub stderr: f64,
}

/// Monte-Carlo estimate of E[e^{−iΔk·x}] with per-component standard errors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CharacteristicEstimate {
    pub estimate: Complex64,
    pub stderr_re: f64,
    pub stderr_im: f64,
    pub exact: f64,
}

impl CharacteristicEstimate {
    /// Largest deviation from the exact value in units of the standard
    /// error, taken over both components. A zero standard error with an
    /// exact match counts as 0.
    pub fn z_score(&self) -> f64 {
        let z = |dev: f64, se: f64| {
            if dev == 0.0 {
                0.0
            } else if se == 0.0 {
                f64::INFINITY
            } else {
                dev / se
            }
        };
        z((self.estimate.re - self.exact).abs(), self.stderr_re).max(z(self.estimate.im.abs(), self.stderr_im))
    }
}

/// Closed-form characteristic function `exp(−β²Δk²/2)`.
pub fn characteristic_exact(rf: &RandomFieldParams, t: f64, delta_k: f64) -> f64 {
    (-0.5 * beta_sq(rf, t) * delta_k * delta_k).exp()
}

/// Exact characteristic function of the sampled process, a Poisson number
/// of Gaussian impulses: `exp(νt(e^{−σ̄²Δk²/2} − 1))`. Reduces to
/// [`characteristic_exact`] when `σ̄Δk ≪ 1`.
pub fn characteristic_compound_poisson(rf: &RandomFieldParams, t: f64, delta_k: f64) -> f64 {
    let s = rf.sigma_bar * delta_k;
    (rf.nu * t * (-0.5 * s * s).exp_m1()).exp()
}

pub fn mc_characteristic(rf: &RandomFieldParams, delta_k: f64, ens: &RandomWalkEnsemble) -> Result<CharacteristicEstimate> {
    if ens.n_samples < 10_000 {
        return Err(Error::invalid("n_samples", format!("need at least 1e4 samples, got {}", ens.n_samples)));
    }
    let (s, s2) = pairwise_sum(&ens.samples, |x| {
        let (sin, cos) = (delta_k * x).sin_cos();
        (Complex64::new(cos, -sin), Complex64::new(cos * cos, sin * sin))
    });
    let n = ens.n_samples as f64;
    let mean = s / n;
    let bessel = n / (n - 1.0);
    let var_re = (s2.re / n - mean.re * mean.re).max(0.0) * bessel;
    let var_im = (s2.im / n - mean.im * mean.im).max(0.0) * bessel;
    Ok(CharacteristicEstimate {
        estimate: mean,
        stderr_re: (var_re / n).sqrt(),
        stderr_im: (var_im / n).sqrt(),
        exact: characteristic_exact(rf, ens.t, delta_k),
    })
}

/// Sums `f` over `xs` in fixed-size leaves combined by a balanced binary
/// tree, so the result is independent of scheduling.
fn pairwise_sum<T, F>(xs: &[f64], f: F) -> (T, T)
where
    T: Copy + Default + std::ops::Add<Output = T> + Send,
    F: Fn(f64) -> (T, T) + Sync,
{
    fn go<T, F>(xs: &[f64], f: &F) -> (T, T)
    where
        T: Copy + Default + std::ops::Add<Output = T> + Send,
        F: Fn(f64) -> (T, T) + Sync,
    {
        if xs.len() <= 64 {
            return xs.iter().fold((T::default(), T::default()), |(a, b), &x| {
                let (u, v) = f(x);
                (a + u, b + v)
            });
        }
        let (l, r) = xs.split_at(xs.len() / 2);
        let ((a, b), (c, d)) = rayon::join(|| go(l, f), || go(r, f));
        (a + c, b + d)
    }
    go(xs, &f)
}
