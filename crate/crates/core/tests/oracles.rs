use nalgebra::DMatrix;
use zeno_core::analytic::{halfline_population, moments};
use zeno_core::lindblad::{
    dominant_frequency, integrate_full, integrate_reduced, DensityMatrix, FullOptions, GeneratorMode, GeneratorSpec,
    ReducedState,
};
use zeno_core::model::{build_level_scheme, EnergyConvention};
use zeno_core::series::uniform_grid;
use zeno_core::trajectory::{run_ensemble, EnsembleSpec};
use zeno_core::ModelParams;

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

fn chain_params(n: usize, alpha: f64, tau: f64) -> ModelParams {
    ModelParams {
        n_left: n,
        n_right: 2,
        omega_left: 2500.0,
        omega_right: 1900.0,
        rabi: 1.0,
        alpha_left: alpha,
        alpha_right: 0.0,
        tau,
    }
}

/// Matrix exponential of the reflecting nearest-neighbour generator.
fn chain_expm(n: usize, d: f64, t: f64) -> Vec<f64> {
    let mut gen = DMatrix::<f64>::zeros(n, n);
    for i in 0..n - 1 {
        gen[(i, i + 1)] += d;
        gen[(i + 1, i)] += d;
        gen[(i, i)] -= d;
        gen[(i + 1, i + 1)] -= d;
    }
    let prop = (gen * t).exp();
    (0..n).map(|i| prop[(i, 0)]).collect()
}

#[test]
fn chain_matches_matrix_exponential() {
    let p = chain_params(6, 0.5, 0.1);
    let d = p.diffusion_left();
    let spec = GeneratorSpec::new(GeneratorMode::ChainsOnly, p).unwrap();
    let t = uniform_grid(3.0, 31);
    let s = integrate_reduced(&ReducedState::ground_left(6, 2), &spec, &t).unwrap();
    let pops = s.populations.unwrap();
    for (i, &ti) in t.iter().enumerate() {
        let exact = chain_expm(6, d, ti);
        for n in 0..6 {
            assert!((pops[i][n] - exact[n]).abs() < 1e-8, "t={ti} n={n}");
        }
    }
}

#[test]
fn long_chain_matches_bessel_halfline() {
    let p = chain_params(160, 0.3, 0.01);
    let d = p.diffusion_left();
    let spec = GeneratorSpec::new(GeneratorMode::ChainsOnly, p).unwrap();
    let t: Vec<f64> = [0.0, 0.05, 0.5, 2.0, 6.0].iter().map(|dt| dt / d).collect();
    let s = integrate_reduced(&ReducedState::ground_left(160, 2), &spec, &t).unwrap();
    let pops = s.populations.unwrap();
    for (i, &ti) in t.iter().enumerate() {
        for n in 1..=40u32 {
            let want = halfline_population(n, d * ti);
            assert!((pops[i][n as usize - 1] - want).abs() < 1e-8, "dt={} n={n}", d * ti);
        }
        let (mu, second_moment) = moments(d * ti);
        let mean: f64 = pops[i].iter().enumerate().map(|(k, p)| (k + 1) as f64 * p).take(160).sum();
        let second: f64 = pops[i].iter().enumerate().map(|(k, p)| ((k + 1) as f64).powi(2) * p).take(160).sum();
        assert!((mean - mu).abs() < 1e-7);
        assert!((second - second_moment).abs() < 1e-6);
    }
}

fn small_desk(alpha: f64) -> ModelParams {
    ModelParams {
        n_left: 3,
        n_right: 3,
        omega_left: 2500.0,
        omega_right: 2500.0 * 9.7 / 13.0,
        rabi: TWO_PI,
        alpha_left: alpha,
        alpha_right: alpha,
        tau: 0.05,
    }
}

#[test]
fn full_and_reduced_agree_on_small_desk() {
    let p = small_desk(1.0);
    let t = uniform_grid(1.0, 41);
    let full = integrate_full(
        &DensityMatrix::pure_basis(p.dim(), 0),
        &GeneratorSpec::new(GeneratorMode::Full, p).unwrap(),
        &t,
        &FullOptions::default(),
    )
    .unwrap();
    let reduced = integrate_reduced(
        &ReducedState::ground_left(3, 3),
        &GeneratorSpec::new(GeneratorMode::Reduced, p).unwrap(),
        &t,
    )
    .unwrap();
    for (a, b) in full.series.p_left.iter().zip(&reduced.p_left) {
        assert!((a - b).abs() < 1e-3);
    }
    assert!(full.min_eigenvalue > -1e-9);
    assert!(full.max_trace_error < 1e-10);
}

/// With few collisions the ground amplitude still Rabi-oscillates and the
/// `1_L 2_L` line splits into `ω_21 ± Ω`.
#[test]
fn weak_collisions_split_the_fast_line() {
    let p = small_desk(0.3);
    let n = 16384;
    let t = uniform_grid(2.0, n + 1);
    let run = integrate_full(
        &DensityMatrix::pure_basis(p.dim(), 0),
        &GeneratorSpec::new(GeneratorMode::Full, p).unwrap(),
        &t,
        &FullOptions { record: vec![(0, 1)], positivity_stride: 64, ..FullOptions::default() },
    )
    .unwrap();
    let scheme = build_level_scheme(&p, EnergyConvention::ShiftedGround);
    let w21 = scheme.energies_left[1] - scheme.energies_left[0];
    let peak = dominant_frequency(&run.elements[0][..n], t[1], 100.0).unwrap();
    let offset = (peak.omega - w21).abs();
    assert!((offset - p.rabi).abs() <= peak.resolution, "peak {} vs {} ± Ω", peak.omega, w21);
}

#[test]
fn monte_carlo_matches_reduced_master() {
    // small α keeps the second-order generator accurate; large ω keeps gap·τ large
    let p = ModelParams {
        n_left: 6,
        n_right: 6,
        omega_left: 2.5e4,
        omega_right: 2.5e4 * 9.7 / 13.0,
        rabi: TWO_PI,
        alpha_left: 0.2,
        alpha_right: 0.2,
        tau: 1.0 / 200.0,
    };
    let t = uniform_grid(1.5, 31);
    let mc = run_ensemble(&EnsembleSpec { params: p, particles: 3000, t_grid: t.clone(), seed: 7 }).unwrap();
    let reduced = integrate_reduced(
        &ReducedState::ground_left(6, 6),
        &GeneratorSpec::new(GeneratorMode::Reduced, p).unwrap(),
        &t,
    )
    .unwrap();
    let se = mc.p_left_stderr.as_ref().unwrap();
    let mut worst = 0.0_f64;
    for ((m, r), s) in mc.p_left.iter().zip(&reduced.p_left).zip(se).skip(1) {
        worst = worst.max((m - r).abs() / (s + 2e-3));
    }
    assert!(worst < 4.5, "max z {worst}");
}
