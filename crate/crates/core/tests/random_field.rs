use num_complex::Complex64;
use pointer_decoherence::quadrature::{integrate_real_line, Tolerance};
use pointer_decoherence::random_field::{
    beta_sq, broadened_width_sq, characteristic_compound_poisson, characteristic_exact, linear_term_pair, mc_characteristic,
    rf_damping, rf_damping_full, rf_density_matrix, rf_probability, rf_saturation, rf_timescales, sigma_from_thermal,
};
use pointer_decoherence::validation::{monte_carlo_grid, MC_SIGMA_LIMIT};
use pointer_decoherence::{
    BathCoefficients, BathModel, FreePointer, PhysicalConstants, PointerConfig, RandomFieldParams, RandomWalkEnsemble, Spin,
};
use proptest::prelude::*;

fn unit() -> PhysicalConstants {
    PhysicalConstants::new(1.0, 1.0).unwrap()
}

fn desk_pointer() -> PointerConfig {
    PointerConfig::from_population(0.5, 1.0, 2.0, 0.4, 0.6, -0.3).unwrap()
}

#[test]
fn vanishing_impulses_recover_free_pointer() {
    let p = desk_pointer();
    let free = FreePointer::new(p, unit());
    let rf = RandomFieldParams::new(1.0, 1e-30).unwrap();
    for &t in &[0.0, 0.5, 2.0] {
        for &(x, y) in &[(0.3, -0.2), (2.1, 1.7), (-2.5, 0.4)] {
            for (s, sp) in [(Spin::Up, Spin::Up), (Spin::Up, Spin::Down), (Spin::Down, Spin::Up)] {
                let a = rf_density_matrix(&p, &unit(), &rf, t, x, y, s, sp).unwrap();
                let b = free.density_matrix(s, sp, t, x, y);
                assert!((a - b).norm() < 1e-14, "t={t} {s:?}{sp:?} {a} vs {b}");
            }
            let a = rf_probability(&p, &unit(), &rf, t, x).unwrap();
            let b = free.probability(t, x);
            assert!((a.total - b.total).abs() < 1e-14);
            assert!((a.p_int - b.p_int).abs() < 1e-14);
        }
    }
}

#[test]
fn hermiticity() {
    let p = desk_pointer();
    let rf = RandomFieldParams::new(2.0, 0.3).unwrap();
    for &t in &[0.1, 1.0, 4.0] {
        for &(x, y) in &[(0.3, -0.2), (2.1, 1.7), (-2.5, 0.4)] {
            let a = rf_density_matrix(&p, &unit(), &rf, t, x, y, Spin::Up, Spin::Down).unwrap();
            let b = rf_density_matrix(&p, &unit(), &rf, t, y, x, Spin::Down, Spin::Up).unwrap().conj();
            assert!((a - b).norm() < 1e-15);
        }
    }
}

#[test]
fn diagonal_is_normalized() {
    let p = desk_pointer();
    let rf = RandomFieldParams::new(2.0, 0.3).unwrap();
    let tol = Tolerance::relative(1e-12);
    for &t in &[0.0, 0.7, 5.0] {
        let w = broadened_width_sq(&p, &unit(), &rf, t).sqrt();
        let trace: Complex64 = [Spin::Up, Spin::Down]
            .iter()
            .map(|&s| {
                integrate_real_line(
                    |x: f64| rf_density_matrix(&p, &unit(), &rf, t, x, x, s, s).unwrap(),
                    s.sign() * p.xbar(),
                    w,
                    tol,
                )
                .unwrap()
                .value
            })
            .sum();
        assert!((trace - 1.0).norm() < 1e-10, "t={t}: {trace}");
        let diag = integrate_real_line(
            |x: f64| {
                let pr = rf_probability(&p, &unit(), &rf, t, x).unwrap();
                pr.p_up + pr.p_down
            },
            0.0,
            w + p.xbar(),
            tol,
        )
        .unwrap()
        .value;
        assert!((diag - 1.0).abs() < 1e-10);
    }
}

#[test]
fn probability_matches_density_diagonal() {
    let p = desk_pointer();
    let rf = RandomFieldParams::new(2.0, 0.3).unwrap();
    let t = 1.3;
    for &x in &[-2.0, -0.1, 0.4, 2.2] {
        let pr = rf_probability(&p, &unit(), &rf, t, x).unwrap();
        let rho = |s, sp| rf_density_matrix(&p, &unit(), &rf, t, x, x, s, sp).unwrap();
        assert!((pr.p_up - rho(Spin::Up, Spin::Up).re).abs() < 1e-14);
        assert!((pr.p_down - rho(Spin::Down, Spin::Down).re).abs() < 1e-14);
        let int = 2.0 * rho(Spin::Up, Spin::Down).re;
        assert!((pr.p_int - int).abs() < 1e-13, "x={x}: {} vs {int}", pr.p_int);
    }
}

#[test]
fn damping_examples() {
    let p = PointerConfig::from_population(0.5, 1.0, 3.0, 0.5, 0.0, 0.0).unwrap();
    let rf = RandomFieldParams::new(1.0, 1.0).unwrap();
    // s = 1 gives half of the saturation value
    assert!((rf_damping(&p, &rf, 1.0).unwrap() - rf_saturation(&p) / 2.0).abs() < 1e-15);
    assert!((rf_saturation(&p) - 4.5).abs() < 1e-15);
    assert_eq!(rf_damping(&p, &rf, 0.0).unwrap(), 0.0);
    assert!(rf_damping_full(&p, &unit(), &rf, 1.0).unwrap() < rf_damping(&p, &rf, 1.0).unwrap());
}

#[test]
fn tau_int_is_the_initial_damping_time() {
    let p = PointerConfig::from_population(1.0, 1e-6, 1e-2, 0.5, 0.0, 0.0).unwrap();
    let rf = RandomFieldParams::new(1.0, 1e-7).unwrap();
    let ts = rf_timescales(&p, &rf);
    assert!((ts.tau_int_ratio() / 2e-6 - 1.0).abs() < 1e-12);
    assert!((ts.t_bluer_ratio() / 1e10 - 1.0).abs() < 1e-12);
    let t = 1e-3 * ts.tau_int;
    let g = rf_damping(&p, &rf, t).unwrap();
    assert!((g / (t / ts.tau_int) - 1.0).abs() < 1e-6);
}

#[test]
fn saturation_matches_fokker_planck() {
    let p = desk_pointer();
    let b = BathCoefficients::from_diffusion(&p, &unit(), 1.0, 0.2).unwrap();
    assert_eq!(rf_saturation(&p), BathModel::new(p, b).g_saturation());
}

#[test]
fn silver_thermal_width() {
    let m = PointerConfig::silver_pointer().mass();
    let s = sigma_from_thermal(&PhysicalConstants::SI, m, 2.5e9, 300.0, None).unwrap();
    let expected = (2.0 * PhysicalConstants::SI.k_b * 300.0 / (m * 2.5e9 * 2.5e9)).sqrt();
    assert!((s / expected - 1.0).abs() < 1e-15);
    assert!((8.5e-8..8.7e-8).contains(&s));
}

#[test]
fn monte_carlo_grid_within_limit() {
    let cells = monte_carlo_grid(10_000, 7).unwrap();
    assert_eq!(cells.len(), 9);
    for c in &cells {
        assert!(c.z_score < MC_SIGMA_LIMIT, "{c:?}");
    }
}

#[test]
fn ensemble_is_reproducible_and_thread_independent() {
    let rf = RandomFieldParams::new(1.0, 1.0).unwrap();
    let a = RandomWalkEnsemble::generate(&rf, 50.0, 5000, 11).unwrap();
    let b = RandomWalkEnsemble::generate(&rf, 50.0, 5000, 11).unwrap();
    let c = RandomWalkEnsemble::generate(&rf, 50.0, 5000, 12).unwrap();
    assert_eq!(a, b);
    assert_ne!(a.samples, c.samples);
    let single = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let many = rayon::ThreadPoolBuilder::new().num_threads(3).build().unwrap();
    let s = single.install(|| RandomWalkEnsemble::generate(&rf, 50.0, 5000, 11).unwrap());
    let m = many.install(|| RandomWalkEnsemble::generate(&rf, 50.0, 5000, 11).unwrap());
    assert_eq!(s, m);
    assert_eq!(s, a);
    let ea = mc_characteristic(&rf, 0.1, &RandomWalkEnsemble::generate(&rf, 50.0, 20_000, 3).unwrap()).unwrap();
    let eb = many.install(|| mc_characteristic(&rf, 0.1, &RandomWalkEnsemble::generate(&rf, 50.0, 20_000, 3).unwrap()).unwrap());
    assert_eq!(ea.estimate.re.to_bits(), eb.estimate.re.to_bits());
    assert_eq!(ea.estimate.im.to_bits(), eb.estimate.im.to_bits());
}

#[test]
fn ensemble_moments() {
    let rf = RandomFieldParams::new(2.0, 0.5).unwrap();
    let t = 30.0;
    let ens = RandomWalkEnsemble::generate(&rf, t, 100_000, 5).unwrap();
    let m = ens.mean();
    assert!(m.mean.abs() < 5.0 * m.stderr, "{m:?}");
    let n = ens.samples.len() as f64;
    let var = ens.samples.iter().map(|x| x * x).sum::<f64>() / n;
    // Var(x²) = 3β⁴ + νtE[x₁⁴] ≈ 3β⁴ for many impulses
    let se = (3.0f64).sqrt() * beta_sq(&rf, t) / n.sqrt();
    assert!((var - beta_sq(&rf, t)).abs() < 5.0 * se, "{var} vs {}", beta_sq(&rf, t));
}

#[test]
fn large_ensembles_resolve_the_compound_poisson_law() {
    let rf = RandomFieldParams::new(1.0, 1.0).unwrap();
    let (t, dk) = (10.0, 0.5);
    let ens = RandomWalkEnsemble::generate(&rf, t, 200_000, 9).unwrap();
    let est = mc_characteristic(&rf, dk, &ens).unwrap();
    let exact = characteristic_compound_poisson(&rf, t, dk);
    let gauss = characteristic_exact(&rf, t, dk);
    assert!((est.estimate.re - exact).abs() < 4.0 * est.stderr_re);
    assert!((est.estimate.re - gauss).abs() > 4.0 * est.stderr_re);
    assert!(est.estimate.im.abs() < 4.0 * est.stderr_im);
}

#[test]
fn zero_time_ensemble_is_zero() {
    let rf = RandomFieldParams::new(1.0, 1.0).unwrap();
    let ens = RandomWalkEnsemble::generate(&rf, 0.0, 10_000, 1).unwrap();
    assert!(ens.samples.iter().all(|&x| x == 0.0));
    let est = mc_characteristic(&rf, 0.3, &ens).unwrap();
    assert_eq!(est.z_score(), 0.0);
    assert!(mc_characteristic(&rf, 0.3, &RandomWalkEnsemble::generate(&rf, 1.0, 9_999, 1).unwrap()).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn linear_terms_coincide(mass in 1e-27f64..1e-20, delta in 1e-8f64..1e-5, gamma in 1e6f64..1e11, temperature in 1.0f64..1000.0, t in 1e-9f64..1e-3) {
        let p = PointerConfig::from_population(mass, delta, 1e-2, 0.5, 0.0, 0.0).unwrap();
        let b = BathCoefficients::from_friction(&p, &PhysicalConstants::SI, gamma, temperature).unwrap();
        let pair = linear_term_pair(&p, &b, t).unwrap();
        prop_assert!(pair.rel_diff() < 1e-13, "{pair:?}");
    }

    #[test]
    fn damping_is_monotone_and_bounded(nu in 0.01f64..100.0, sigma in 0.01f64..10.0, t1 in 0.0f64..100.0, dt in 0.0f64..100.0) {
        let p = desk_pointer();
        let rf = RandomFieldParams::new(nu, sigma).unwrap();
        let g1 = rf_damping_full(&p, &unit(), &rf, t1).unwrap();
        let g2 = rf_damping_full(&p, &unit(), &rf, t1 + dt).unwrap();
        prop_assert!(g1 >= 0.0 && g2 <= rf_saturation(&p) * (1.0 + 1e-14));
        let h1 = rf_damping(&p, &rf, t1).unwrap();
        let h2 = rf_damping(&p, &rf, t1 + dt).unwrap();
        prop_assert!(h2 >= h1 * (1.0 - 1e-14));
    }
}
