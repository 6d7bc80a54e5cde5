//! Exact collision-averaged Lindblad equation on the full density matrix.

use num_complex::Complex64;

use super::density::{symmetrize_reals, DensityMatrix};
use super::{GeneratorMode, GeneratorSpec};
use crate::error::{Result, ZenoError};
use crate::ode::{Dopri5, OdeStats};
use crate::series::{left_moments, SeriesResult};
use crate::trajectory::validate_grid;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Precomputed sparse pieces of `dρ/dt`.
#[derive(Debug, Clone)]
struct FullGenerator {
    dim: usize,
    energies: Vec<f64>,
    rabi: f64,
    pair: (usize, usize),
    /// Neighbours `(j, α_s)` of each level under `V`.
    neighbours: Vec<Vec<(usize, f64)>>,
    inv_tau: f64,
}

impl FullGenerator {
    fn new(spec: &GeneratorSpec) -> Self {
        let p = &spec.params;
        let dim = p.dim();
        let mut neighbours = vec![Vec::new(); dim];
        for (offset, n, alpha) in [(0, p.n_left, p.alpha_left), (p.n_left, p.n_right, p.alpha_right)] {
            if alpha == 0.0 {
                continue;
            }
            for k in 0..n.saturating_sub(1) {
                neighbours[offset + k].push((offset + k + 1, alpha));
                neighbours[offset + k + 1].push((offset + k, alpha));
            }
        }
        Self {
            dim,
            energies: spec.scheme.energies(),
            rabi: spec.rabi(),
            pair: (0, p.n_left),
            neighbours,
            inv_tau: 1.0 / p.tau,
        }
    }

    /// `V ⋅ src` for a row-major matrix.
    fn apply_v(&self, src: &[Complex64], dst: &mut [Complex64]) {
        let d = self.dim;
        for i in 0..d {
            let row = &mut dst[i * d..(i + 1) * d];
            row.fill(Complex64::new(0.0, 0.0));
            for &(j, w) in &self.neighbours[i] {
                for (r, s) in row.iter_mut().zip(&src[j * d..(j + 1) * d]) {
                    *r += w * s;
                }
            }
        }
    }

    /// Writes `dρ/dt = M + M† + VρV/τ` with `M = −iHρ − (i/τ)Vρ − V²ρ/2τ`.
    fn apply(&self, rho: &[Complex64], out: &mut [Complex64], vr: &mut [Complex64], m: &mut [Complex64]) {
        let d = self.dim;
        let (a, b) = self.pair;
        self.apply_v(rho, vr);
        self.apply_v(vr, m);
        for i in 0..d {
            for k in 0..d {
                let idx = i * d + k;
                let mut h_rho = self.energies[i] * rho[idx];
                if i == a {
                    h_rho += self.rabi * rho[b * d + k];
                } else if i == b {
                    h_rho += self.rabi * rho[a * d + k];
                }
                m[idx] = -I * h_rho - I * self.inv_tau * vr[idx] - 0.5 * self.inv_tau * m[idx];
            }
        }
        for i in 0..d {
            for k in 0..d {
                // (VρV)_ik = Σ_j V_ij (ρV)_jk and ρV = (Vρ)†
                let mut vrv = Complex64::new(0.0, 0.0);
                for &(j, w) in &self.neighbours[i] {
                    vrv += w * vr[k * d + j].conj();
                }
                out[i * d + k] = m[i * d + k] + m[k * d + i].conj() + self.inv_tau * vrv;
            }
        }
    }
}

/// `dρ/dt` of the full generator.
pub fn full_lindblad_rhs(rho: &DensityMatrix, spec: &GeneratorSpec) -> Result<DensityMatrix> {
    spec.require(&[GeneratorMode::Full])?;
    let dim = spec.params.dim();
    if rho.dim != dim {
        return Err(ZenoError::DimensionMismatch { expected: dim, found: rho.dim });
    }
    let gen = FullGenerator::new(spec);
    let mut out = DensityMatrix::zeros(dim);
    let mut vr = vec![Complex64::new(0.0, 0.0); dim * dim];
    let mut m = vr.clone();
    gen.apply(&rho.data, &mut out.data, &mut vr, &mut m);
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct FullOptions {
    pub rtol: f64,
    pub atol: f64,
    /// Refuse problems whose estimated step count exceeds this.
    pub step_cap: u64,
    /// Matrix elements `(row, col)` recorded at every sample.
    pub record: Vec<(usize, usize)>,
    /// Check the smallest eigenvalue every this many samples; 0 disables.
    pub positivity_stride: usize,
}

impl Default for FullOptions {
    fn default() -> Self {
        Self { rtol: 1e-8, atol: 1e-14, step_cap: 20_000_000, record: Vec::new(), positivity_stride: 1 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FullRun {
    pub series: SeriesResult,
    /// One track per entry of [`FullOptions::record`].
    pub elements: Vec<Vec<Complex64>>,
    pub final_state: DensityMatrix,
    pub max_trace_error: f64,
    pub max_hermiticity_error: f64,
    /// Smallest eigenvalue seen at the checked samples.
    pub min_eigenvalue: f64,
    pub estimated_steps: u64,
    pub stats: OdeStats,
}

/// Rough explicit step count: ten steps per radian of the fastest rotation.
pub fn estimate_steps(spec: &GeneratorSpec, span: f64) -> u64 {
    let e = spec.scheme.energies();
    let (lo, hi) = e.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &v| (l.min(v), h.max(v)));
    let p = &spec.params;
    let a = p.alpha_left.abs().max(p.alpha_right.abs());
    let fastest = (hi - lo) + 2.0 * spec.rabi().abs() + (2.0 * a + 4.0 * a * a) / p.tau;
    (10.0 * span * fastest).ceil() as u64
}

pub fn integrate_full(rho0: &DensityMatrix, spec: &GeneratorSpec, t_grid: &[f64], opts: &FullOptions) -> Result<FullRun> {
    spec.require(&[GeneratorMode::Full])?;
    validate_grid(t_grid)?;
    let dim = spec.params.dim();
    if rho0.dim != dim {
        return Err(ZenoError::DimensionMismatch { expected: dim, found: rho0.dim });
    }
    if let Some(&(r, c)) = opts.record.iter().find(|(r, c)| *r >= dim || *c >= dim) {
        return Err(ZenoError::OutOfRange(format!("element ({r}, {c}) outside a {dim}-level space")));
    }
    let span = t_grid.last().unwrap() - t_grid[0].min(0.0);
    let estimated = estimate_steps(spec, span);
    if estimated > opts.step_cap {
        return Err(ZenoError::TooStiff { estimated, cap: opts.step_cap });
    }

    let gen = FullGenerator::new(spec);
    let n_left = spec.params.n_left;
    let zero = Complex64::new(0.0, 0.0);
    let mut rho = vec![zero; dim * dim];
    let mut drho = vec![zero; dim * dim];
    let mut vr = vec![zero; dim * dim];
    let mut m = vec![zero; dim * dim];
    let rhs = |_t: f64, y: &[f64], dy: &mut [f64]| {
        for (c, r) in rho.iter_mut().zip(y.chunks_exact(2)) {
            *c = Complex64::new(r[0], r[1]);
        }
        gen.apply(&rho, &mut drho, &mut vr, &mut m);
        for (c, r) in drho.iter().zip(dy.chunks_exact_mut(2)) {
            r[0] = c.re;
            r[1] = c.im;
        }
    };

    let samples = t_grid.len();
    let mut p_left = Vec::with_capacity(samples);
    let mut populations = Vec::with_capacity(samples);
    let mut mu_left = Vec::with_capacity(samples);
    let mut sigma_left = Vec::with_capacity(samples);
    let mut coherence = Vec::with_capacity(samples);
    let mut elements = vec![Vec::with_capacity(samples); opts.record.len()];
    let (mut trace_err, mut herm_err, mut min_eig) = (0.0_f64, 0.0_f64, f64::INFINITY);
    let mut last = rho0.clone();

    let solver = Dopri5 {
        max_steps: (4 * opts.step_cap).min(usize::MAX as u64) as usize,
        ..Dopri5::with_tolerances(opts.rtol, opts.atol)
    };
    let stats = solver.integrate_projected(
        rhs,
        |y| symmetrize_reals(dim, y),
        0.0,
        &rho0.as_reals(),
        t_grid,
        |i, _, y| {
            let state = DensityMatrix::from_reals(dim, y);
            let pops = state.populations();
            p_left.push(pops[..n_left].iter().sum());
            let (mu, sigma) = left_moments(&pops, n_left);
            mu_left.push(mu);
            sigma_left.push(sigma);
            coherence.push(-2.0 * state.get(0, n_left).im);
            for (track, &(r, c)) in elements.iter_mut().zip(&opts.record) {
                track.push(state.get(r, c));
            }
            trace_err = trace_err.max((state.trace() - 1.0).norm());
            herm_err = herm_err.max(state.hermiticity_error());
            if opts.positivity_stride > 0 && (i % opts.positivity_stride == 0 || i + 1 == samples) {
                min_eig = min_eig.min(state.min_eigenvalue());
            }
            populations.push(pops);
            if i + 1 == samples {
                last = state;
            }
        },
    )?;

    let series = SeriesResult {
        t: t_grid.to_vec(),
        rabi_period: spec.params.rabi_period(),
        n_left,
        p_left,
        p_left_stderr: None,
        populations: Some(populations),
        mu_left,
        sigma_left,
        coherence: Some(coherence),
    };
    Ok(FullRun {
        series,
        elements,
        final_state: last,
        max_trace_error: trace_err,
        max_hermiticity_error: herm_err,
        min_eigenvalue: min_eig,
        estimated_steps: estimated,
        stats,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ModelParams;

    fn desk(alpha_left: f64, alpha_right: f64, rabi: f64) -> GeneratorSpec {
        let params = ModelParams {
            n_left: 3,
            n_right: 3,
            omega_left: 50.0,
            omega_right: 37.0,
            rabi,
            alpha_left,
            alpha_right,
            tau: 0.05,
        };
        GeneratorSpec::new(GeneratorMode::Full, params).unwrap()
    }

    /// Dense-matrix evaluation of the same generator.
    fn dense_rhs(rho: &DensityMatrix, spec: &GeneratorSpec) -> DensityMatrix {
        use crate::model::OperatorSet;
        let ops = OperatorSet::new(&spec.params, &spec.scheme);
        let c = |m: nalgebra::DMatrix<f64>| m.map(|v| Complex64::new(v, 0.0));
        let h = c(nalgebra::DMatrix::from_diagonal(&nalgebra::DVector::from_vec(ops.h0_diagonal.clone())) + ops.h1());
        let v = c(ops.collision_operator(spec.params.alpha_left, spec.params.alpha_right));
        let r = rho.to_matrix();
        let it = Complex64::new(1.0 / spec.params.tau, 0.0);
        let comm = |a: &nalgebra::DMatrix<Complex64>| a * &r - &r * a;
        let v2 = &v * &v;
        let out = comm(&h) * (-I) + comm(&v) * (-I * it) - (&v2 * &r + &r * &v2) * (it * 0.5) + (&v * &r * &v) * it;
        DensityMatrix { dim: rho.dim, data: out.transpose().iter().cloned().collect() }
    }

    fn random_state(dim: usize, seed: u64) -> DensityMatrix {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let a = nalgebra::DMatrix::from_fn(dim, dim, |_, _| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5));
        let m = &a * a.adjoint();
        let tr = m.trace();
        let m = m / tr;
        DensityMatrix { dim, data: m.transpose().iter().cloned().collect() }
    }

    #[test]
    fn matches_dense_evaluation() {
        let spec = desk(0.3, 0.2, 4.0);
        for seed in 0..5 {
            let rho = random_state(6, seed);
            let got = full_lindblad_rhs(&rho, &spec).unwrap();
            let want = dense_rhs(&rho, &spec);
            let err = got.data.iter().zip(&want.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
            assert!(err < 1e-12, "seed {seed}: {err}");
            assert!(got.trace().norm() < 1e-12);
            assert!(got.hermiticity_error() < 1e-12);
        }
    }

    #[test]
    fn ground_level_loses_population_at_collision_rate() {
        let spec = desk(0.3, 0.0, 4.0);
        let rho = DensityMatrix::pure_basis(6, 0);
        let d = full_lindblad_rhs(&rho, &spec).unwrap();
        let rate = 0.09 / 0.05;
        assert!((d.get(0, 0).re + rate).abs() < 1e-12);
        assert!((d.get(1, 1).re - rate).abs() < 1e-12);
    }

    #[test]
    fn mixed_state_traceless_derivative() {
        let spec = desk(0.3, 0.2, 4.0);
        let d = full_lindblad_rhs(&DensityMatrix::maximally_mixed(6), &spec).unwrap();
        assert!(d.trace().norm() < 1e-14);
    }

    #[test]
    fn two_level_rabi() {
        let params = ModelParams { n_left: 1, n_right: 1, alpha_left: 0.0, alpha_right: 0.0, ..ModelParams::default() };
        let spec = GeneratorSpec::new(GeneratorMode::Full, params).unwrap();
        let t: Vec<f64> = (0..50).map(|i| i as f64 * params.rabi_period() / 40.0).collect();
        let run = integrate_full(&DensityMatrix::pure_basis(2, 0), &spec, &t, &FullOptions::default()).unwrap();
        for (s, pl) in t.iter().zip(&run.series.p_left) {
            assert!((pl - (params.rabi * s).cos().powi(2)).abs() < 1e-8, "{}", pl - (params.rabi * s).cos().powi(2));
        }
    }

    #[test]
    fn stiffness_guard() {
        let spec = GeneratorSpec::new(GeneratorMode::Full, ModelParams::default()).unwrap();
        let t = vec![0.0, ModelParams::default().rabi_period()];
        let err = integrate_full(&DensityMatrix::pure_basis(80, 0), &spec, &t, &FullOptions::default()).unwrap_err();
        assert!(matches!(err, ZenoError::TooStiff { .. }));
    }

    #[test]
    fn wrong_mode_or_dimension() {
        let mut spec = desk(0.1, 0.1, 1.0);
        assert!(full_lindblad_rhs(&DensityMatrix::zeros(5), &spec).is_err());
        spec.mode = GeneratorMode::Reduced;
        assert!(full_lindblad_rhs(&DensityMatrix::zeros(6), &spec).is_err());
    }
}
