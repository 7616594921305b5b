//! Acceptance criteria, one line each. Exits nonzero when any fails.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::Parser;
use pointer_decoherence::cli::{run, Cli};
use pointer_decoherence::fp_analytic::RegimeWindows;
use pointer_decoherence::fp_numeric::{compare, scaled_model, solve_to, GridSlice, SolverConfig};
use pointer_decoherence::gas_bath::{alpha, gamma_closed, gamma_quadrature, spectral_density};
use pointer_decoherence::quadrature::{integrate_real_line, Tolerance};
use pointer_decoherence::random_field::{linear_term_pair, rf_saturation, RandomFieldParams};
use pointer_decoherence::units::thermal_energy;
use pointer_decoherence::validation::{
    desk_triangle_model, free_limit_suite, monte_carlo_grid, triangle_suite, MC_SIGMA_LIMIT, TRIANGLE_TOL,
};
use pointer_decoherence::{
    BathCoefficients, BathModel, FreePointer, GammaBackend, GasConfig, PhysicalConstants, PointerConfig, Spin,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SI: PhysicalConstants = PhysicalConstants::SI;

type Outcome = Result<String, String>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn silver_air() -> Result<(PointerConfig, BathCoefficients), String> {
    let p = PointerConfig::silver_pointer();
    let b = BathCoefficients::from_gas(&p, &GasConfig::air_bath(), &SI, GammaBackend::Closed).map_err(err)?;
    Ok((p, b))
}

fn cli_notes(args: &[&str]) -> Result<Vec<(String, String)>, String> {
    let mut argv = vec!["pointer-decoherence"];
    argv.extend_from_slice(args);
    let cli = Cli::try_parse_from(argv).map_err(err)?;
    let mut out = Vec::new();
    let mut stderr = Vec::new();
    let code = run(&cli, &mut out, &mut stderr);
    if code != 0 {
        return Err(format!("exit {code}: {}", String::from_utf8_lossy(&stderr)));
    }
    Ok(String::from_utf8(out)
        .map_err(err)?
        .lines()
        .filter_map(|l| l.strip_prefix("# ")?.split_once(": "))
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect())
}

fn note<'a>(notes: &'a [(String, String)], key: &str) -> Result<&'a str, String> {
    notes.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str()).ok_or(format!("no `{key}` in report"))
}

fn free_spreading_time() -> Outcome {
    let tau = FreePointer::new(PointerConfig::silver_pointer(), SI).tau_f;
    check((2.9e-3..=3.5e-3).contains(&tau), format!("tau_f = {:.4} ms", tau * 1e3))
}

fn air_friction() -> Outcome {
    let (_, b) = silver_air()?;
    check((1.25e9..=5e9).contains(&b.gamma), format!("gamma = {:.4e} 1/s", b.gamma))
}

fn pinned_friction_rates() -> Outcome {
    let (p, b) = silver_air()?;
    let m = BathModel::new(p, b.with_gamma(2.5e9).map_err(err)?);
    let gamma = m.bath.gamma;
    let early_tau_r = m.rate_early() / gamma;
    let linear_over_gamma = m.rate_linear() / gamma;
    let r_f = gamma * FreePointer::new(p, SI).tau_f;
    let g_sat = m.g_saturation();
    check(
        (40.0..=60.0).contains(&early_tau_r)
            && (2.8e5..=4.2e5).contains(&linear_over_gamma)
            && (5e6..=2e7).contains(&r_f)
            && g_sat == 5e7,
        format!("rate_early*tau_r = {early_tau_r:.2}, rate_linear/gamma = {linear_over_gamma:.4e}, R_f = {r_f:.4e}, g_sat = {g_sat:e}"),
    )
}

fn rate_identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let mass = 10f64.powf(rng.gen_range(-27.0..-20.0));
        let delta = 10f64.powf(rng.gen_range(-8.0..-5.0));
        let xbar = 10f64.powf(rng.gen_range(-6.0..-1.0));
        let gamma = 10f64.powf(rng.gen_range(6.0..11.0));
        let temperature = rng.gen_range(1.0..1000.0);
        let p = PointerConfig::from_population(mass, delta, xbar, 0.5, 0.0, 0.0).map_err(err)?;
        let m = BathModel::new(p, BathCoefficients::from_friction(&p, &SI, gamma, temperature).map_err(err)?);
        let lhs = m.rate_early().powi(3);
        let rhs = m.rate_linear() * gamma * gamma / 3.0;
        worst = worst.max((lhs / rhs - 1.0).abs());
    }
    check(worst < 1e-12, format!("worst relative error {worst:.2e} over 20 sets"))
}

fn decoherence_curve() -> Outcome {
    let unit = PhysicalConstants::new(1.0, 1.0).map_err(err)?;
    let grid: Vec<f64> = (0..=140).map(|i| 10f64.powf(-4.0 + i as f64 / 20.0)).collect();
    let build = |mass: f64, diffusion: f64| -> Result<BathModel, String> {
        let p = PointerConfig::from_population(mass, 1.0, 10.0, 0.5, 0.0, 0.0).map_err(err)?;
        Ok(BathModel::new(p, BathCoefficients::from_diffusion(&p, &unit, 1.0, diffusion).map_err(err)?))
    };
    // regime fits on the wide-window model, terminal value on the saturating one
    let wide = build(50.0, 0.25)?.decoherence_profile(&grid, &RegimeWindows::default()).map_err(err)?;
    let sat = build(5.0, 2.5)?.decoherence_profile(&grid, &RegimeWindows::default()).map_err(err)?;
    let exponent = wide.cubic_fit.ok_or("no early fit")?.slope;
    let slope_ratio = wide.linear_fit.ok_or("no linear fit")?.slope / wide.rate_linear;
    let last = sat.rows.last().ok_or("empty grid")?;
    check(
        wide.monotone
            && sat.monotone
            && (2.9..=3.1).contains(&exponent)
            && (slope_ratio - 1.0).abs() < 0.1
            && last.gamma_t == 1e3
            && last.g_normalized > 0.99,
        format!(
            "monotone, early exponent {exponent:.4}, linear slope / rate {slope_ratio:.4}, g/g_sat at gamma t = 1e3: {:.6}",
            last.g_normalized
        ),
    )
}

fn l2_diff(a: &GridSlice, b: &GridSlice) -> f64 {
    let num: f64 = a.values.iter().zip(&b.values).map(|(x, y)| (x - y).norm_sqr()).sum();
    let den: f64 = a.values.iter().map(|x| x.norm_sqr()).sum();
    (num / den).sqrt()
}

fn oracle_triangle() -> Outcome {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().map_err(err)?;
    let start = Instant::now();
    let m = desk_triangle_model();
    let (edges, orders) = pool.install(|| -> Result<_, String> {
        let edges = triangle_suite(&m, &m);
        let (scaled, _) = scaled_model(&m).map_err(err)?;
        let base = SolverConfig::auto(&scaled, 0.0, 0.5, 1.0);
        let solve = |cfg: SolverConfig| solve_to(&m, Spin::Up, Spin::Up, 0.5, 1.0, Some(cfg)).map(|r| r.slice).map_err(err);
        // time step: self-convergence on a fixed grid
        let coarse = SolverConfig { dt: 0.05, ..base };
        let runs = [1.0, 2.0, 4.0].map(|d| solve(SolverConfig { dt: coarse.dt / d, ..coarse }));
        let [a, b, c] = runs;
        let (a, b, c) = (a?, b?, c?);
        let dt_order = (l2_diff(&a, &b) / l2_diff(&b, &c)).log2();
        // grid spacing: against the closed form with a fine time step
        let mut errs = Vec::new();
        for f in [1, 2, 4] {
            let s = solve(SolverConfig { n_points: (base.n_points - 1) * f + 1, dt: base.dt / 16.0, ..base })?;
            let exact = GridSlice::from_form(&m.density_form(Spin::Up, Spin::Up, 1.0).map_err(err)?, 0.5, s.k_grid.clone());
            errs.push(compare(&exact, &s).map_err(err)?.l2_rel);
        }
        let dk_order = (errs[0] / errs[1]).log2().min((errs[1] / errs[2]).log2());
        Ok((edges, (dt_order, dk_order)))
    })?;
    let elapsed = start.elapsed();
    let worst = edges.iter().map(|e| e.metric).fold(0.0, f64::max);
    let passed = edges.iter().all(|e| e.passed);
    let (dt_order, dk_order) = orders;
    check(
        passed && worst < TRIANGLE_TOL && dt_order >= 1.9 && dk_order >= 1.9 && elapsed < Duration::from_secs(120),
        format!(
            "{} edges, worst L2 {worst:.2e}, order dt {dt_order:.3} dK {dk_order:.3}, {:.1} s on one thread",
            edges.len(),
            elapsed.as_secs_f64()
        ),
    )
}

fn trace_conservation() -> Outcome {
    let unit = PhysicalConstants::new(1.0, 1.0).map_err(err)?;
    let p = PointerConfig::from_population(0.5, 1.0, 5.0, 0.3, 0.4, -0.1).map_err(err)?;
    let m = BathModel::new(p, BathCoefficients::from_diffusion(&p, &unit, 1.0, 0.15).map_err(err)?);
    let tol = Tolerance { abs: 1e-14, ..Tolerance::relative(1e-12) };
    let mut worst: f64 = 0.0;
    for i in 0..=30 {
        let gt = 0.01 * 10f64.powf(i as f64 / 10.0);
        for (sigma, pop) in [(Spin::Up, 0.3), (Spin::Down, 0.7)] {
            let form = m.density_form(sigma, sigma, gt).map_err(err)?;
            let trace = integrate_real_line(|k| form.value(k, 0.0), 0.0, 1.0, tol).map_err(err)?.value / (2.0 * PI);
            worst = worst.max((trace - pop).norm() / pop);
        }
    }
    check(worst < 1e-10, format!("worst relative drift {worst:.2e} over gamma t in [0.01, 10]"))
}

fn free_limit() -> Outcome {
    let edges = free_limit_suite();
    let worst = edges.iter().map(|e| e.metric).fold(0.0, f64::max);
    check(
        edges.iter().all(|e| e.passed) && worst < 1e-6,
        format!("{} comparisons at gamma tau_f = 1e-6, worst {worst:.2e}", edges.len()),
    )
}

fn detailed_balance() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let t = rng.gen_range(50.0..1000.0);
        let g = GasConfig::new(4.8e-26, 2.5e25, t, 1.75e-10, 50.0 * thermal_energy(&SI, t)).map_err(err)?;
        // momentum transfers of order the thermal wavevector
        let q = rng.gen_range(0.3..3.0) / alpha(&g, &SI).sqrt();
        let omega = rng.gen_range(-3.0..3.0) * SI.k_b * t / SI.hbar;
        let plus = spectral_density(&g, &SI, q, omega).map_err(err)?;
        let minus = spectral_density(&g, &SI, q, -omega).map_err(err)?;
        worst = worst.max((minus / plus / (-SI.hbar * omega / (SI.k_b * t)).exp() - 1.0).abs());
    }
    check(worst < 1e-12, format!("worst relative error {worst:.2e} at 50 points"))
}

fn friction_quadrature() -> Outcome {
    let p = PointerConfig::silver_pointer();
    let mut worst: f64 = 0.0;
    let mut gap_ok = true;
    let mut worst_gap_ratio: f64 = 0.0;
    for &n0 in &[1e23, 2.5e25, 1e27] {
        for &t in &[30.0, 300.0, 3000.0] {
            for &a in &[5e-11, 1.75e-10, 1e-9] {
                let g = GasConfig::new(4.8e-26, n0, t, a, 50.0 * thermal_energy(&SI, t)).map_err(err)?;
                let closed = gamma_closed(&p, &g, &SI);
                let quad = gamma_quadrature(&p, &g, &SI).map_err(err)?;
                worst = worst.max((quad / closed.exact - 1.0).abs());
                // symmetric relative gap |a − b|/max(a, b)
                let gap = (closed.large_varrho - closed.exact).abs() / closed.large_varrho.max(closed.exact);
                let bound = 2.0 / closed.varrho;
                gap_ok &= gap < bound;
                worst_gap_ratio = worst_gap_ratio.max(gap / bound);
            }
        }
    }
    check(
        worst < 1e-8 && gap_ok,
        format!("27 points, worst quadrature error {worst:.2e}, smallest margin 1 - gap/(2/varrho) = {:.2e}", 1.0 - worst_gap_ratio),
    )
}

fn monte_carlo() -> Outcome {
    let start = Instant::now();
    let cells = monte_carlo_grid(10_000, 2024).map_err(err)?;
    let elapsed = start.elapsed();
    let worst = cells.iter().map(|c| c.z_score).fold(0.0, f64::max);
    check(
        cells.len() == 9 && worst < MC_SIGMA_LIMIT && elapsed < Duration::from_secs(30),
        format!("3x3 grid, n = 1e4, worst |z| {worst:.2}, {:.2} s", elapsed.as_secs_f64()),
    )
}

fn random_field_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut worst: f64 = 0.0;
    let mut saturation_equal = true;
    for _ in 0..20 {
        let mass = 10f64.powf(rng.gen_range(-27.0..-20.0));
        let delta = 10f64.powf(rng.gen_range(-8.0..-5.0));
        let gamma = 10f64.powf(rng.gen_range(6.0..11.0));
        let temperature = rng.gen_range(1.0..1000.0);
        let t = 10f64.powf(rng.gen_range(-9.0..-3.0));
        let p = PointerConfig::from_population(mass, delta, 1e-2, 0.5, 0.0, 0.0).map_err(err)?;
        let b = BathCoefficients::from_friction(&p, &SI, gamma, temperature).map_err(err)?;
        worst = worst.max(linear_term_pair(&p, &b, t).map_err(err)?.rel_diff());
        let rf = RandomFieldParams::thermal(&p, &SI, gamma, temperature, None).map_err(err)?;
        rf.validate().map_err(err)?;
        saturation_equal &= rf_saturation(&p) == BathModel::new(p, b).g_saturation();
    }
    check(
        worst < 1e-13 && saturation_equal,
        format!("linear terms agree to {worst:.2e} over 20 sets, saturation values identical: {saturation_equal}"),
    )
}

fn discrepancy_report() -> Outcome {
    let notes = cli_notes(&["--preset", "silver_random_field", "random-field"])?;
    let computed = note(&notes, "tau_int_over_tau_r")?;
    let quoted = note(&notes, "quoted_tau_int_over_tau_r")?;
    let label = note(&notes, "tau_int_discrepancy")?;
    check(
        computed == "2e-6" && quoted.starts_with("1e-10") && label.contains("unresolved"),
        format!("computed {computed}, quoted {quoted}, labelled unresolved"),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 13] = [
        ("free spreading time of the silver pointer", free_spreading_time),
        ("friction of silver in air", air_friction),
        ("rates at pinned friction", pinned_friction_rates),
        ("early and linear rate identity", rate_identity),
        ("decoherence curve regimes", decoherence_curve),
        ("oracle triangle and convergence order", oracle_triangle),
        ("trace conservation", trace_conservation),
        ("free-limit recovery", free_limit),
        ("detailed balance", detailed_balance),
        ("friction quadrature and large-range limit", friction_quadrature),
        ("Monte-Carlo characteristic function", monte_carlo),
        ("Fokker-Planck and random-field equivalence", random_field_equivalence),
        ("damping-time discrepancy report", discrepancy_report),
    ];
    let mut failures = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(detail) => {
                failures += 1;
                println!("FAIL {:>2} {name}: {detail}", i + 1);
            }
        }
    }
    println!("{} of {} criteria pass", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
