use std::f64::consts::PI;

use num_complex::Complex64;
use pointer_decoherence::fp_analytic::{density_propagator, wigner_propagator};
use pointer_decoherence::quadrature::{integrate_real_line, Tolerance};
use pointer_decoherence::{BathCoefficients, BathModel, FreePointer, PhysicalConstants, PointerConfig, Spin};
use proptest::prelude::*;

fn unit() -> PhysicalConstants {
    PhysicalConstants::new(1.0, 1.0).unwrap()
}

fn model(mass: f64, xbar: f64, pop: f64, gamma: f64, diffusion: f64) -> BathModel {
    let p = PointerConfig::from_population(mass, 1.0, xbar, pop, 0.4, -0.1).unwrap();
    BathModel::new(p, BathCoefficients::from_diffusion(&p, &unit(), gamma, diffusion).unwrap())
}

fn desk() -> BathModel {
    model(0.5, 5.0, 0.3, 1.0, 0.15)
}

fn complex_integral(f: impl Fn(f64) -> Complex64, center: f64, scale: f64) -> Complex64 {
    // oscillating off-diagonal slices integrate to much less than ∫|f|
    let tol = Tolerance {
        abs: 1e-14,
        ..Tolerance::relative(1e-12)
    };
    integrate_real_line(f, center, scale, tol).unwrap().value
}

#[test]
fn trace_is_conserved() {
    let m = desk();
    let mut gt = 0.01;
    while gt <= 10.0 {
        for (sigma, pop) in [(Spin::Up, 0.3), (Spin::Down, 0.7)] {
            let form = m.density_form(sigma, sigma, gt).unwrap();
            let trace = complex_integral(|k| form.value(k, 0.0), 0.0, 1.0) / (2.0 * PI);
            assert!((trace - pop).norm() < 1e-10, "gt={gt} {trace}");
        }
        gt *= 1.5;
    }
}

#[test]
fn initial_slice_trace() {
    let m = desk();
    let form = m.initial_density(Spin::Up, Spin::Up);
    let trace = complex_integral(|k| form.value(k, 0.0), 0.0, 1.0) / (2.0 * PI);
    assert!((trace - 0.3).norm() < 1e-12);
}

#[test]
fn hermiticity() {
    let m = desk();
    let mut n = 0;
    for i in 0..10 {
        let t = 0.05 + 0.7 * i as f64;
        let a = m.density_form(Spin::Up, Spin::Down, t).unwrap();
        let b = m.density_form(Spin::Down, Spin::Up, t).unwrap();
        for j in 0..100 {
            let k = -1.5 + 0.03 * j as f64;
            let p = 0.9 - 0.019 * j as f64;
            let lhs = a.value(k, p);
            let rhs = b.value(k, -p).conj();
            assert!((lhs - rhs).norm() <= 1e-13 * lhs.norm().max(1e-300), "t={t} k={k} p={p}");
            n += 1;
        }
    }
    assert_eq!(n, 1000);
}

#[test]
fn chapman_kolmogorov() {
    let m = desk();
    let b = m.bath;
    let v = b.hbar_over_mass();
    for &(t1, t2) in &[(0.3, 0.7), (1.0, 2.5), (2.0, 0.1)] {
        let start = m.density_form(Spin::Up, Spin::Down, t1).unwrap();
        let end = m.density_form(Spin::Up, Spin::Down, t1 + t2).unwrap();
        for &(k, p) in &[(0.0, 0.0), (0.4, -0.3), (-0.7, 0.5)] {
            let composed = complex_integral(
                |kp| density_propagator(b.gamma, b.diffusion, v, t2, p, k, kp).unwrap() * start.value(kp, p),
                0.0,
                1.0,
            ) / (2.0 * PI);
            let direct = end.value(k, p);
            assert!((composed - direct).norm() < 1e-9 * direct.norm().max(1e-12), "t1={t1} t2={t2} k={k} p={p}");
        }
    }
}

#[test]
fn wigner_propagator_has_unit_mass() {
    let b = desk().bath;
    let v = b.hbar_over_mass();
    for &t in &[0.1, 1.0, 6.0] {
        let tol = Tolerance::relative(1e-11);
        let (x0, k0) = (0.7, -0.4);
        let mass = integrate_real_line(
            |k: f64| {
                integrate_real_line(|x: f64| wigner_propagator(b.gamma, b.diffusion, v, t, x, k, x0, k0).unwrap(), x0, 2.0, tol)
                    .unwrap()
                    .value
            },
            0.0,
            1.0,
            tol,
        )
        .unwrap()
        .value
            / (2.0 * PI);
        assert!((mass - 1.0).abs() < 1e-9, "t={t}: {mass}");
    }
}

#[test]
fn weak_bath_matches_free_spread() {
    // ϰ reduces to |ζ|² when γ → 0
    let p = PointerConfig::from_population(0.5, 1.0, 2.0, 0.5, 0.0, 0.0).unwrap();
    let free = FreePointer::new(p, unit());
    let m = BathModel::new(p, BathCoefficients::from_friction(&p, &unit(), 1e-9, 0.1).unwrap());
    for &s in &[0.2, 1.0, 3.0] {
        let t = s * free.tau_f;
        let br = m.broadening(t).unwrap();
        assert!((br.varkappa - free.spread(t).xi).abs() < 1e-7, "s={s}");
    }
}

#[test]
fn early_time_cubic_law() {
    // silver-like ratio of scales: γτ_f ≫ 1
    let m = model(50.0, 10.0, 0.5, 1.0, 0.25);
    let rate = m.rate_early();
    for &gt in &[1e-5, 1e-4] {
        let ratio = m.decoherence_g(gt).unwrap() / (rate * gt).powi(3);
        assert!((ratio - 1.0).abs() < 1e-3, "gt={gt}: {ratio}");
    }
}

#[test]
fn intermediate_slope() {
    let m = model(50.0, 10.0, 0.5, 1.0, 0.25);
    let (t0, h) = (30.0, 1e-3);
    let slope = (m.decoherence_g(t0 + h).unwrap() - m.decoherence_g(t0 - h).unwrap()) / (2.0 * h);
    let ratio = slope / m.rate_linear();
    assert!((ratio - 1.0).abs() < 0.05, "{ratio}");
}

#[test]
fn saturation_at_long_times() {
    let m = model(5.0, 10.0, 0.5, 1.0, 2.5);
    let g = m.decoherence_g(1e4).unwrap();
    assert!((g / m.g_saturation() - 1.0).abs() < 1e-3);
    assert!(m.decoherence_g(1e300).unwrap().is_finite());
}

#[test]
fn profile_rejects_unsorted_grid() {
    let w = Default::default();
    assert!(desk().decoherence_profile(&[1.0, 0.5], &w).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn rate_identity(mass in 0.1f64..100.0, xbar in 0.1f64..20.0, gamma in 0.01f64..100.0, diffusion in 0.01f64..10.0) {
        let m = model(mass, xbar, 0.5, gamma, diffusion);
        let lhs = m.rate_early().powi(3);
        let rhs = m.rate_linear() * gamma * gamma / 3.0;
        prop_assert!((lhs / rhs - 1.0).abs() < 1e-13);
    }

    #[test]
    fn g_is_monotone_and_bounded(mass in 0.1f64..100.0, xbar in 0.1f64..20.0, diffusion in 0.01f64..10.0, a in 1e-4f64..50.0, da in 0.0f64..50.0) {
        let m = model(mass, xbar, 0.5, 1.0, diffusion);
        let g1 = m.decoherence_g(a).unwrap();
        let g2 = m.decoherence_g(a + da).unwrap();
        prop_assert!(g2 >= g1 * (1.0 - 1e-14));
        prop_assert!(g2 <= m.g_saturation() * (1.0 + 1e-14));
        prop_assert!(g1 >= 0.0);
    }

    #[test]
    fn slice_never_overflows(gt in 1e-6f64..1e4, k in -5.0f64..5.0, p in -5.0f64..5.0) {
        let f = desk().density_form(Spin::Up, Spin::Down, gt).unwrap();
        let v = f.value(k, p);
        prop_assert!(v.is_finite());
        prop_assert!(v.norm() <= desk().initial_density(Spin::Up, Spin::Down).value(0.0, 0.0).norm() * (1.0 + 1e-12) + 1e-300);
    }
}

#[test]
fn silver_thermal_wavelength() {
    let si = PhysicalConstants::SI;
    let p = PointerConfig::silver_pointer();
    let m = BathModel::new(p, BathCoefficients::from_friction(&p, &si, 2.5e9, 300.0).unwrap());
    let r = m.comparison_rates();
    let expected = si.hbar / (2.0 * p.mass() * si.k_b * 300.0).sqrt();
    assert!((r.lambda_t / expected - 1.0).abs() < 1e-14);
    assert!((2.72e-12..2.74e-12).contains(&r.lambda_t), "{}", r.lambda_t);
    assert!((r.gamma_z / (2.5e9 * (p.xbar() / expected).powi(2)) - 1.0).abs() < 1e-12);
}
