//! Exact solution of the one-dimensional Fokker–Planck equation for the
//! pointer density matrix in momentum variables `K = (k+k′)/2`, `p = k − k′`:
//!
//! `∂ρ/∂t + i(ħ/M)Kp ρ = γ ∂_K(Kρ) + D ∂²_K ρ`
//!
//! starting from the free post-kick Gaussian. Slices are represented as the
//! exponential of a complex quadratic form so that large `γt` and strong
//! damping never overflow.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{require_positive, Error, Result};
use crate::fit::{fit_line, fit_power_law, LineFit};
use crate::free_pointer::{ln_gaussian_component, ProbabilityComponents};
use crate::gas_bath::BathCoefficients;
use crate::units::{PointerConfig, Spin};

/// `x − 2 tanh(x/2)`, accurate for small `x`.
pub fn tanh_excess(x: f64) -> f64 {
    if x.abs() < 0.1 {
        let y = x / 2.0;
        let y2 = y * y;
        // 2(y − tanh y)
        2.0 * y
            * y2
            * (1.0 / 3.0
                + y2 * (-2.0 / 15.0 + y2 * (17.0 / 315.0 + y2 * (-62.0 / 2835.0 + y2 * 1382.0 / 155_925.0))))
    } else {
        x - 2.0 * (x / 2.0).tanh()
    }
}

/// Broadening shape `f(x) = 2(x − 2(1−e^{−x})/(1+e^{−x})) + (1−e^{−x})³/(1+e^{−x})`.
///
/// Behaves as `2x³/3` for small `x` and `2x − 3` for large `x`.
pub fn broadening_shape(x: f64) -> f64 {
    let one_minus = -(-x).exp_m1();
    2.0 * tanh_excess(x) + one_minus.powi(3) / (2.0 - one_minus)
}

/// `ln(e^x − 1)` without overflow.
fn ln_expm1(x: f64) -> f64 {
    if x > 30.0 {
        x + (-(-x).exp()).ln_1p()
    } else {
        x.exp_m1().ln()
    }
}

/// Auxiliary functions of time for friction `γ` and diffusion `D`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeFunctions {
    pub t: f64,
    /// (e^{γt} − 1)/γ (s); infinite past overflow, see `ln_exp_drift1`
    pub exp_drift1: f64,
    /// (e^{2γt} − 1)/(2γ) (s)
    pub exp_drift2: f64,
    pub ln_exp_drift1: f64,
    pub ln_exp_drift2: f64,
    /// 1/(4D·exp_drift2) (m²); `+∞` at t = 0
    pub u: f64,
    pub ln_u: f64,
    /// (2/γ) tanh(γt/2) (s)
    pub lambda: f64,
    /// (ħ/Mγ)²(t − λ) (m⁴·s)
    pub theta: f64,
    /// e^{−γt}
    pub decay: f64,
    /// 2D(1 − e^{−2γt})/γ, the drift-contracted momentum variance growth (1/m²)
    pub nu: f64,
}

/// Evaluates the time functions; `hbar_over_mass` is ħ/M (m²/s).
pub fn time_functions(gamma: f64, diffusion: f64, hbar_over_mass: f64, t: f64) -> Result<TimeFunctions> {
    require_positive("gamma", gamma)?;
    require_positive("diffusion", diffusion)?;
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::invalid("t", format!("must be finite and >= 0, got {t}")));
    }
    let x = gamma * t;
    let ln_exp_drift1 = if x == 0.0 { f64::NEG_INFINITY } else { ln_expm1(x) - gamma.ln() };
    let ln_exp_drift2 = if x == 0.0 {
        f64::NEG_INFINITY
    } else {
        ln_expm1(2.0 * x) - (2.0 * gamma).ln()
    };
    let ln_u = -(4.0 * diffusion).ln() - ln_exp_drift2;
    Ok(TimeFunctions {
        t,
        exp_drift1: x.exp_m1() / gamma,
        exp_drift2: (2.0 * x).exp_m1() / (2.0 * gamma),
        ln_exp_drift1,
        ln_exp_drift2,
        u: ln_u.exp(),
        ln_u,
        lambda: 2.0 / gamma * (x / 2.0).tanh(),
        theta: hbar_over_mass * hbar_over_mass * tanh_excess(x) / gamma.powi(3),
        decay: (-x).exp(),
        nu: -2.0 * diffusion * (-2.0 * x).exp_m1() / gamma,
    })
}

/// Density-matrix slice `ρ(K, p; σ, σ′; t) = exp(log_prefactor − Q(K, p))`
/// with `Q = quad_kk K² + quad_kp K p + quad_pp p² + lin_k K + lin_p p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogGaussianForm {
    pub sigma: Spin,
    pub sigma_prime: Spin,
    pub t: f64,
    pub log_prefactor: Complex64,
    pub quad_kk: Complex64,
    pub quad_kp: Complex64,
    pub quad_pp: Complex64,
    pub lin_k: Complex64,
    pub lin_p: Complex64,
}

impl LogGaussianForm {
    pub fn ln_value(&self, k: f64, p: f64) -> Complex64 {
        let q = self.quad_kk * (k * k) + self.quad_kp * (k * p) + self.quad_pp * (p * p) + self.lin_k * k + self.lin_p * p;
        self.log_prefactor - q
    }

    pub fn value(&self, k: f64, p: f64) -> Complex64 {
        self.ln_value(k, p).exp()
    }

    /// ln of the position-space diagonal `∫dp/2π e^{ipx} ∫dK/2π ρ(K, p)`,
    /// by exact Gaussian integration.
    pub fn ln_position_density(&self, x: f64) -> Complex64 {
        let a = self.quad_kk;
        let b = self.quad_kp;
        let d = self.lin_k;
        let a2 = self.quad_pp - b * b / (a * 4.0);
        let b2 = self.lin_p - Complex64::new(0.0, x) - b * d / (a * 2.0);
        self.log_prefactor + 0.5 * (Complex64::from(PI) / a).ln() + d * d / (a * 4.0)
            + 0.5 * (Complex64::from(PI) / a2).ln()
            + b2 * b2 / (a2 * 4.0)
            - 2.0 * (2.0 * PI).ln()
    }

    pub fn all_finite(&self) -> bool {
        [self.quad_kk, self.quad_kp, self.quad_pp, self.lin_k, self.lin_p]
            .iter()
            .all(|c| c.is_finite())
            && !self.log_prefactor.re.is_nan()
            && !self.log_prefactor.im.is_nan()
    }
}

/// Spatial broadening `Δ_β² = Δ²(ϰ + κ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BroadeningParts {
    /// free spreading and friction
    pub varkappa: f64,
    /// bath diffusion
    pub kappa: f64,
    pub delta_beta_sq: f64,
}

/// Pointer in a Fokker–Planck bath.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BathModel {
    pub pointer: PointerConfig,
    pub bath: BathCoefficients,
}

impl BathModel {
    pub fn new(pointer: PointerConfig, bath: BathCoefficients) -> Self {
        Self { pointer, bath }
    }

    pub fn time_functions(&self, t: f64) -> Result<TimeFunctions> {
        time_functions(self.bath.gamma, self.bath.diffusion, self.bath.hbar_over_mass(), t)
    }

    fn form_at(&self, sigma: Spin, sigma_prime: Spin, tf: &TimeFunctions) -> Result<LogGaussianForm> {
        let p = &self.pointer;
        let d2 = p.delta().powi(2);
        let xbar = p.xbar();
        let d = sigma.sign() - sigma_prime.sign();
        let s = sigma.sign() + sigma_prime.sign();
        let q = tf.decay;
        let nu = tf.nu;
        let big_s = q * q + 2.0 * d2 * nu;
        let h = self.bath.hbar_over_mass() * tf.lambda / 2.0;
        let i = Complex64::i();
        let weight = p.amplitude(sigma_prime).conj() * p.amplitude(sigma);
        let log_prefactor = weight.ln() + 0.5 * (8.0 * PI * d2 / big_s).ln() - nu * xbar * xbar * d * d / (4.0 * big_s);
        let form = LogGaussianForm {
            sigma,
            sigma_prime,
            t: tf.t,
            log_prefactor,
            quad_kk: Complex64::from(2.0 * d2 / big_s),
            quad_kp: i * (h * (1.0 + q / big_s)),
            quad_pp: Complex64::from(d2 / 2.0 + self.bath.diffusion * tf.theta + nu * h * h / (4.0 * big_s)),
            lin_k: i * (q / big_s * xbar * d),
            lin_p: i * (xbar * s / 2.0) + nu * xbar * d * h / (2.0 * big_s),
        };
        if !form.all_finite() {
            return Err(Error::NonFinite(format!("density form at t = {}", tf.t)));
        }
        Ok(form)
    }

    /// The post-kick initial slice.
    pub fn initial_density(&self, sigma: Spin, sigma_prime: Spin) -> LogGaussianForm {
        let tf = self.time_functions(0.0).expect("t = 0 is valid");
        self.form_at(sigma, sigma_prime, &tf).expect("initial form is finite")
    }

    /// Slice at time `t > 0`.
    pub fn density_form(&self, sigma: Spin, sigma_prime: Spin, t: f64) -> Result<LogGaussianForm> {
        if !(t > 0.0) {
            return Err(Error::invalid("t", format!("must be > 0, got {t}; use initial_density")));
        }
        let tf = self.time_functions(t)?;
        self.form_at(sigma, sigma_prime, &tf)
    }

    /// ln ρ(K, p; σ, σ′; t).
    pub fn evolve_density(&self, sigma: Spin, sigma_prime: Spin, t: f64, k: f64, p: f64) -> Result<Complex64> {
        Ok(self.density_form(sigma, sigma_prime, t)?.ln_value(k, p))
    }

    /// Initial Wigner function `W(X, K; σ, σ′; 0)`, normalized so that
    /// `∫∫ W dX dK/2π` is the trace weight `a*_{σ′}a_σ` for σ = σ′.
    pub fn initial_wigner(&self, sigma: Spin, sigma_prime: Spin, x: f64, k: f64) -> Complex64 {
        let p = &self.pointer;
        let d2 = p.delta().powi(2);
        let d = sigma.sign() - sigma_prime.sign();
        let center = p.xbar() * (sigma.sign() + sigma_prime.sign()) / 2.0;
        let weight = p.amplitude(sigma_prime).conj() * p.amplitude(sigma);
        let arg = Complex64::new(-2.0 * d2 * k * k - (x - center).powi(2) / (2.0 * d2), -k * p.xbar() * d);
        weight * 2.0 * arg.exp()
    }

    pub fn broadening(&self, t: f64) -> Result<BroadeningParts> {
        let b = &self.bath;
        let x = b.gamma * t;
        if !(t.is_finite() && t >= 0.0) {
            return Err(Error::invalid("t", format!("must be finite and >= 0, got {t}")));
        }
        let d2 = self.pointer.delta().powi(2);
        let one_minus = -(-x).exp_m1();
        let varkappa = 1.0 + (one_minus / b.r_f).powi(2);
        let kappa = 4.0 * d2 * b.diffusion / (b.gamma * b.r_f * b.r_f) * broadening_shape(x);
        Ok(BroadeningParts {
            varkappa,
            kappa,
            delta_beta_sq: d2 * (varkappa + kappa),
        })
    }

    /// Saturation value ½(X̄/Δ)² of the decoherence function.
    pub fn g_saturation(&self) -> f64 {
        0.5 * (self.pointer.xbar() / self.pointer.delta()).powi(2)
    }

    /// Decoherence function g(t), the exponent damping the interference.
    pub fn decoherence_g(&self, t: f64) -> Result<f64> {
        let br = self.broadening(t)?;
        Ok(self.g_saturation() * br.kappa / (br.kappa + br.varkappa))
    }

    pub fn probability(&self, t: f64, x: f64) -> Result<ProbabilityComponents> {
        let br = self.broadening(t)?;
        let p = &self.pointer;
        let w2 = br.delta_beta_sq;
        let b = &self.bath;
        let ln_up = ln_gaussian_component(p.amp_plus(), w2, x, p.xbar());
        let ln_down = ln_gaussian_component(p.amp_minus(), w2, x, -p.xbar());
        let drift_time = -(-b.gamma * t).exp_m1() / b.gamma;
        let phase = x * p.xbar() / (w2 * b.tau_f) * drift_time + p.phi_minus() - p.phi_plus();
        let g = self.g_saturation() * br.kappa / (br.kappa + br.varkappa);
        let overlap = p.xbar().powi(2) / (2.0 * w2);
        Ok(ProbabilityComponents::assemble(ln_up, ln_down, phase, g, overlap))
    }

    /// Early-time rate Γ′ with g ≈ (Γ′t)³ for γt ≪ 1.
    pub fn rate_early(&self) -> f64 {
        let p = &self.pointer;
        (p.xbar().powi(2) * self.bath.gamma * self.bath.k_b_t() / (3.0 * p.mass() * p.delta().powi(4))).cbrt()
    }

    /// Intermediate-time slope Γ with g ≈ Γt for 1 ≪ γt before saturation.
    pub fn rate_linear(&self) -> f64 {
        let p = &self.pointer;
        p.xbar().powi(2) * self.bath.k_b_t() / (p.delta().powi(4) * p.mass() * self.bath.gamma)
    }

    pub fn comparison_rates(&self) -> ComparisonRates {
        let b = &self.bath;
        let lambda_t = b.constants.hbar / (2.0 * self.pointer.mass() * b.k_b_t()).sqrt();
        let gamma_z = b.gamma * (self.pointer.xbar() / lambda_t).powi(2);
        let gamma_lin = self.rate_linear();
        ComparisonRates {
            gamma_z,
            lambda_t,
            linear_over_z: gamma_lin / gamma_z,
            linear_over_z_times_rf_sq: gamma_lin / gamma_z * b.r_f * b.r_f,
        }
    }

    /// Normalized decoherence curve on a grid of γt values with regime fits.
    pub fn decoherence_profile(&self, gamma_t_grid: &[f64], windows: &RegimeWindows) -> Result<DecoherenceProfile> {
        if gamma_t_grid.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::invalid("gamma_t grid", "must be sorted ascending"));
        }
        let gamma = self.bath.gamma;
        let g_sat = self.g_saturation();
        let mut rows = Vec::with_capacity(gamma_t_grid.len());
        for &gt in gamma_t_grid {
            let t = gt / gamma;
            let br = self.broadening(t)?;
            let g = g_sat * br.kappa / (br.kappa + br.varkappa);
            rows.push(DecoherenceRow {
                gamma_t: gt,
                g,
                g_normalized: g / g_sat,
                varkappa: br.varkappa,
                kappa: br.kappa,
                delta_beta_sq: br.delta_beta_sq,
            });
        }
        let in_window = |lo: f64, hi: f64| -> (Vec<f64>, Vec<f64>) {
            rows.iter()
                .filter(|r| r.gamma_t >= lo && r.gamma_t <= hi)
                .map(|r| (r.gamma_t / gamma, r.g))
                .unzip()
        };
        let (te, ge) = in_window(windows.early.0, windows.early.1);
        let cubic = fit_power_law(&te, &ge);
        let (tl, gl) = in_window(windows.linear.0, windows.linear.1);
        let linear = fit_line(&tl, &gl);
        let monotone = rows.windows(2).all(|w| w[1].g >= w[0].g);
        Ok(DecoherenceProfile {
            rows,
            g_saturation: g_sat,
            monotone,
            cubic_fit: cubic,
            cubic_rate: cubic.map(|f| (f.intercept / 3.0).exp()),
            linear_fit: linear,
            rate_early: self.rate_early(),
            rate_linear: self.rate_linear(),
            windows: *windows,
        })
    }
}

/// Propagator of a density slice from `K′` at time 0 to `K` at time `t`, at
/// fixed `p`: `e^{γt}√(4πu) e^{−u(e^{γt}K−K′)²} e^{−DΘp²−iϑp}` with
/// `ϑ = (ħ/2M)λ(K+K′)`. Applied as `ρ(K,t) = ∫dK′/2π J ρ(K′,0)`.
pub fn ln_density_propagator(
    tf: &TimeFunctions,
    diffusion: f64,
    hbar_over_mass: f64,
    p: f64,
    k: f64,
    k_prime: f64,
) -> Result<Complex64> {
    if !(tf.t > 0.0) {
        return Err(Error::invalid("t", "propagator needs t > 0"));
    }
    // e^{γt}√u = √(u e^{2γt}) and u e^{2γt} = 1/ν
    let dk = k - tf.decay * k_prime;
    let vartheta = hbar_over_mass / 2.0 * tf.lambda * (k + k_prime);
    Ok(Complex64::new(
        0.5 * (4.0 * PI / tf.nu).ln() - dk * dk / tf.nu - diffusion * tf.theta * p * p,
        -vartheta * p,
    ))
}

pub fn density_propagator(
    gamma: f64,
    diffusion: f64,
    hbar_over_mass: f64,
    t: f64,
    p: f64,
    k: f64,
    k_prime: f64,
) -> Result<Complex64> {
    let tf = time_functions(gamma, diffusion, hbar_over_mass, t)?;
    Ok(ln_density_propagator(&tf, diffusion, hbar_over_mass, p, k, k_prime)?.exp())
}

/// Phase-space propagator of the Wigner function from `(X′, K′)` at time 0 to
/// `(X, K)` at time `t`; `W(t) = ∫∫ J W(0) dX′dK′/2π`.
#[allow(clippy::too_many_arguments)]
pub fn wigner_propagator(
    gamma: f64,
    diffusion: f64,
    hbar_over_mass: f64,
    t: f64,
    x: f64,
    k: f64,
    x_prime: f64,
    k_prime: f64,
) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::invalid("t", "propagator needs t > 0"));
    }
    let tf = time_functions(gamma, diffusion, hbar_over_mass, t)?;
    let dt = diffusion * tf.theta;
    let dk = k - tf.decay * k_prime;
    let vartheta = hbar_over_mass / 2.0 * tf.lambda * (k + k_prime);
    let phi = (x - x_prime - vartheta).powi(2);
    Ok((-0.5 * (tf.nu * dt).ln() - dk * dk / tf.nu - phi / (4.0 * dt)).exp())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComparisonRates {
    /// γ(X̄/λ_T)² (1/s)
    pub gamma_z: f64,
    /// thermal wavelength ħ/√(2Mk_BT) (m)
    pub lambda_t: f64,
    /// Γ/Γ_Z
    pub linear_over_z: f64,
    /// (Γ/Γ_Z)·R_f²
    pub linear_over_z_times_rf_sq: f64,
}

/// γt windows for the early (cubic) and intermediate (linear) regime fits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegimeWindows {
    pub early: (f64, f64),
    pub linear: (f64, f64),
}

impl Default for RegimeWindows {
    fn default() -> Self {
        Self {
            early: (1e-4, 1e-2),
            linear: (10.0, 100.0),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecoherenceRow {
    pub gamma_t: f64,
    pub g: f64,
    pub g_normalized: f64,
    pub varkappa: f64,
    pub kappa: f64,
    pub delta_beta_sq: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecoherenceProfile {
    pub rows: Vec<DecoherenceRow>,
    pub g_saturation: f64,
    pub monotone: bool,
    /// log-log fit of g against t over the early window
    pub cubic_fit: Option<LineFit>,
    /// Γ′ implied by the early fit, assuming exponent 3
    pub cubic_rate: Option<f64>,
    /// fit of g against t (s) over the intermediate window
    pub linear_fit: Option<LineFit>,
    pub rate_early: f64,
    pub rate_linear: f64,
    pub windows: RegimeWindows,
}
