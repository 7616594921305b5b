//! Cross-checks between the closed forms and the numerical oracles, grouped
//! the way the `validate` command reports them.

use rayon::prelude::*;

use crate::error::Result;
use crate::fp_analytic::BathModel;
use crate::fp_numeric::{compare, propagate_by_kernel, scaled_model, solve_to_times, GridSlice};
use crate::free_pointer::FreePointer;
use crate::gas_bath::BathCoefficients;
use crate::random_field::{mc_characteristic, RandomFieldParams, RandomWalkEnsemble};
use crate::units::{PhysicalConstants, PointerConfig, Spin};

pub const TRIANGLE_TOL: f64 = 1e-4;
pub const FREE_LIMIT_TOL: f64 = 1e-6;
pub const MC_SIGMA_LIMIT: f64 = 4.0;
pub const MC_NU_T: [f64; 3] = [10.0, 100.0, 1000.0];
pub const MC_SIGMA_DK: [f64; 3] = [0.05, 0.1, 0.2];

/// Largest scaled deflection, diffusion and saturation the slice solver is
/// run at; beyond these a model is replaced by [`desk_triangle_model`].
/// Off-diagonal slices decay like `e^{−g}`, and past `g ≈ 15` the remaining
/// signal sits below the solver's absolute error on the initial slice.
pub const DESK_XBAR_MAX: f64 = 10.0;
pub const DESK_DIFFUSION_MAX: f64 = 10.0;
pub const DESK_G_SAT_MAX: f64 = 15.0;

/// Outcome of one oracle comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct Edge {
    pub suite: &'static str,
    pub name: String,
    pub metric: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl Edge {
    fn new(suite: &'static str, name: String, metric: f64, tolerance: f64) -> Self {
        Self {
            suite,
            name,
            metric,
            tolerance,
            passed: metric.is_finite() && metric < tolerance,
        }
    }

    fn failed(suite: &'static str, name: String, tolerance: f64) -> Self {
        Self {
            suite,
            name,
            metric: f64::NAN,
            tolerance,
            passed: false,
        }
    }
}

/// Scaled model used by the oracle triangle: ħ = k_B = γ = Δ = 1, M = 0.5,
/// X̄ = 5, D = 0.15, so that g saturates at 12.5.
pub fn desk_triangle_model() -> BathModel {
    let c = PhysicalConstants::new(1.0, 1.0).expect("unit constants");
    let p = PointerConfig::from_population(0.5, 1.0, 5.0, 0.5, 0.0, 0.0).expect("desk pointer");
    let b = BathCoefficients::from_diffusion(&p, &c, 1.0, 0.15).expect("desk bath");
    BathModel::new(p, b)
}

/// Whether a model can be solved on a grid directly, judged in scaled units.
pub fn is_desk_scale(model: &BathModel) -> bool {
    match scaled_model(model) {
        Ok((s, _)) => {
            s.pointer.xbar() <= DESK_XBAR_MAX
                && s.bath.diffusion <= DESK_DIFFUSION_MAX
                && s.g_saturation() <= DESK_G_SAT_MAX
                && (1e-2..=1e2).contains(&s.bath.hbar_over_mass())
        }
        Err(_) => false,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TriangleCase {
    pub sigma: Spin,
    pub sigma_prime: Spin,
    /// scaled relative wavevector
    pub p: f64,
}

pub const TRIANGLE_TIMES: [f64; 3] = [0.1, 1.0, 5.0];

pub fn triangle_cases() -> Vec<TriangleCase> {
    let mut out = Vec::new();
    for &(sigma, sigma_prime) in &[(Spin::Up, Spin::Up), (Spin::Up, Spin::Down)] {
        for &p in &[0.0, 0.5, 1.0] {
            out.push(TriangleCase { sigma, sigma_prime, p });
        }
    }
    out
}

/// PDE solver, kernel quadrature and closed form compared pairwise on each
/// case at the γt values of [`TRIANGLE_TIMES`]. `reference` supplies the
/// closed form; pass a perturbed copy of `model` to check that the suite
/// detects a wrong coefficient.
pub fn triangle_suite(model: &BathModel, reference: &BathModel) -> Vec<Edge> {
    let cases = triangle_cases();
    let per_case: Vec<Vec<Edge>> = cases
        .par_iter()
        .map(|case| triangle_case(model, reference, case))
        .collect();
    per_case.into_iter().flatten().collect()
}

fn triangle_case(model: &BathModel, reference: &BathModel, case: &TriangleCase) -> Vec<Edge> {
    let label = format!("({},{}) p={}", case.sigma.label(), case.sigma_prime.label(), case.p);
    let run = || -> Result<Vec<Edge>> {
        let (_, scaling) = scaled_model(model)?;
        let p = scaling.momentum_to_si(case.p);
        let times: Vec<f64> = TRIANGLE_TIMES.iter().map(|&t| scaling.time_to_si(t)).collect();
        let runs = solve_to_times(model, case.sigma, case.sigma_prime, p, &times, None)?;
        let mut edges = Vec::new();
        for (run, &gt) in runs.iter().zip(&TRIANGLE_TIMES) {
            let pde = &run.slice;
            let form = reference.density_form(case.sigma, case.sigma_prime, pde.t)?;
            let exact = GridSlice::from_form(&form, p, pde.k_grid.clone());
            let kernel = propagate_by_kernel(model, case.sigma, case.sigma_prime, p, &pde.k_grid, pde.t)?;
            let name = |edge: &str| format!("{edge} {label} gt={gt}");
            edges.push(Edge::new("triangle", name("pde-vs-closed"), compare(&exact, pde)?.l2_rel, TRIANGLE_TOL));
            edges.push(Edge::new("triangle", name("kernel-vs-closed"), compare(&exact, &kernel)?.l2_rel, TRIANGLE_TOL));
            edges.push(Edge::new("triangle", name("pde-vs-kernel"), compare(&kernel, pde)?.l2_rel, TRIANGLE_TOL));
        }
        Ok(edges)
    };
    run().unwrap_or_else(|e| vec![Edge::failed("triangle", format!("{label}: {e}"), TRIANGLE_TOL)])
}

/// Pointer and temperature for the free-limit comparison, in units with
/// ħ = k_B = 1 and τ_f = 1.
pub fn free_limit_setup() -> (PointerConfig, PhysicalConstants, f64) {
    let c = PhysicalConstants::new(1.0, 1.0).expect("unit constants");
    let p = PointerConfig::from_population(0.5, 1.0, 2.0, 0.5, 0.3, -0.2).expect("free-limit pointer");
    (p, c, 0.1)
}

pub const FREE_LIMIT_GAMMA_TAU_F: f64 = 1e-6;
pub const FREE_LIMIT_TIMES: [f64; 3] = [0.25, 0.5, 1.0];

/// Bath model at γτ_f = 1e-6 against the free pointer: broadened width
/// against Δ_f², and each probability component against its free
/// counterpart relative to that component's peak, for t ≤ τ_f.
pub fn free_limit_suite() -> Vec<Edge> {
    let run = || -> Result<Vec<Edge>> {
        let (p, c, temperature) = free_limit_setup();
        let free = FreePointer::new(p, c);
        let bath = BathCoefficients::from_friction(&p, &c, FREE_LIMIT_GAMMA_TAU_F / free.tau_f, temperature)?;
        let model = BathModel::new(p, bath);
        let mut width: f64 = 0.0;
        let mut comp = [0.0f64; 3];
        for &s in &FREE_LIMIT_TIMES {
            let t = s * free.tau_f;
            width = width.max((model.broadening(t)?.delta_beta_sq / free.free_spread(t) - 1.0).abs());
            let half = p.xbar() + 6.0 * p.delta() * free.spread(t).xi.sqrt();
            let mut peak = [0.0f64; 3];
            let mut dev = [0.0f64; 3];
            for i in 0..=400 {
                let x = -half + 2.0 * half * i as f64 / 400.0;
                let a = free.probability(t, x);
                let b = model.probability(t, x)?;
                for (j, (u, v)) in [(a.p_up, b.p_up), (a.p_down, b.p_down), (a.p_int, b.p_int)].into_iter().enumerate() {
                    peak[j] = peak[j].max(u.abs());
                    dev[j] = dev[j].max((u - v).abs());
                }
            }
            for j in 0..3 {
                comp[j] = comp[j].max(dev[j] / peak[j]);
            }
        }
        Ok(vec![
            Edge::new("free-limit", "width-vs-free-spread".into(), width, FREE_LIMIT_TOL),
            Edge::new("free-limit", "p_up-vs-free".into(), comp[0], FREE_LIMIT_TOL),
            Edge::new("free-limit", "p_down-vs-free".into(), comp[1], FREE_LIMIT_TOL),
            Edge::new("free-limit", "p_int-vs-free".into(), comp[2], FREE_LIMIT_TOL),
        ])
    };
    run().unwrap_or_else(|e| vec![Edge::failed("free-limit", format!("free limit: {e}"), FREE_LIMIT_TOL)])
}

/// One cell of the Monte-Carlo grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McCell {
    pub nu_t: f64,
    pub sigma_dk: f64,
    pub estimate_re: f64,
    pub estimate_im: f64,
    pub stderr_re: f64,
    pub stderr_im: f64,
    pub exact: f64,
    pub z_score: f64,
}

/// Characteristic function of the impulse sum over the (νt, σ̄Δk) grid with
/// ν = σ̄ = 1. Each νt uses one ensemble, seeded by `seed` plus its index.
pub fn monte_carlo_grid(n_samples: usize, seed: u64) -> Result<Vec<McCell>> {
    let rf = RandomFieldParams::new(1.0, 1.0)?;
    let mut cells = Vec::new();
    for (i, &nu_t) in MC_NU_T.iter().enumerate() {
        let ens = RandomWalkEnsemble::generate(&rf, nu_t, n_samples, seed.wrapping_add(i as u64))?;
        for &sigma_dk in &MC_SIGMA_DK {
            let est = mc_characteristic(&rf, sigma_dk, &ens)?;
            cells.push(McCell {
                nu_t,
                sigma_dk,
                estimate_re: est.estimate.re,
                estimate_im: est.estimate.im,
                stderr_re: est.stderr_re,
                stderr_im: est.stderr_im,
                exact: est.exact,
                z_score: est.z_score(),
            });
        }
    }
    Ok(cells)
}

pub fn monte_carlo_suite(n_samples: usize, seed: u64) -> Vec<Edge> {
    match monte_carlo_grid(n_samples, seed) {
        Ok(cells) => cells
            .iter()
            .map(|c| {
                Edge::new(
                    "monte-carlo",
                    format!("nu_t={} sigma_dk={}", c.nu_t, c.sigma_dk),
                    c.z_score,
                    MC_SIGMA_LIMIT,
                )
            })
            .collect(),
        Err(e) => vec![Edge::failed("monte-carlo", format!("monte carlo: {e}"), MC_SIGMA_LIMIT)],
    }
}
