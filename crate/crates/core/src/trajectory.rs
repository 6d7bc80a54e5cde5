//! Quantum-trajectory Monte Carlo.
//!
//! Each molecule is a pure state that evolves freely between Poisson-timed
//! collisions and is kicked by the collision unitary at each collision.
//! Ensemble averages over independent trajectories estimate the level
//! populations of the averaged density matrix.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Result, ZenoError};
use crate::model::{build_level_scheme, EnergyConvention, LevelScheme, ModelParams};
use crate::series::{left_moments, SeriesResult};
use crate::stochastic::{CollisionKernel, PoissonStream};

/// Trajectories per work unit. Fixed so that the reduction order, and hence
/// the floating-point result, does not depend on the thread count.
const CHUNK: usize = 32;

/// Amplitudes over `1_L..N_L, 1_R..N_R`.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    pub amplitudes: Vec<Complex64>,
    pub n_left: usize,
}

impl PureState {
    /// `|1_L⟩`.
    pub fn ground_left(n_left: usize, n_right: usize) -> Self {
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); n_left + n_right];
        amplitudes[0] = Complex64::new(1.0, 0.0);
        Self { amplitudes, n_left }
    }

    pub fn basis(n_left: usize, n_right: usize, index: usize) -> Self {
        let mut s = Self::ground_left(n_left, n_right);
        s.amplitudes[0] = Complex64::new(0.0, 0.0);
        s.amplitudes[index] = Complex64::new(1.0, 0.0);
        s
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn p_left(&self) -> f64 {
        self.amplitudes[..self.n_left].iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn p_right(&self) -> f64 {
        self.amplitudes[self.n_left..].iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn populations(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }
}

/// Exact `exp(−iH_f t/ħ)` for a degenerate ground pair.
///
/// With `E_{1_L} = E_{1_R}`, `H₀` and `H₁` commute, so the propagator is a
/// diagonal phase followed by a 2×2 rotation on the ground pair.
#[derive(Debug, Clone)]
pub struct FreePropagator {
    energies: Vec<f64>,
    rabi: f64,
    right_ground: usize,
}

impl FreePropagator {
    pub fn new(scheme: &LevelScheme, rabi: f64) -> Result<Self> {
        if !scheme.is_ground_degenerate() {
            return Err(ZenoError::NonDegenerateGround {
                left: scheme.energies_left[0],
                right: scheme.energies_right[0],
            });
        }
        Ok(Self { energies: scheme.energies(), rabi, right_ground: scheme.energies_left.len() })
    }

    pub fn propagate(&self, state: &mut PureState, dt: f64) {
        debug_assert_eq!(state.amplitudes.len(), self.energies.len());
        for (a, &e) in state.amplitudes.iter_mut().zip(&self.energies) {
            if e != 0.0 {
                *a *= Complex64::from_polar(1.0, -e * dt);
            }
        }
        let (s, c) = (self.rabi * dt).sin_cos();
        let a = state.amplitudes[0];
        let b = state.amplitudes[self.right_ground];
        let mi = Complex64::new(0.0, -s);
        state.amplitudes[0] = a * c + mi * b;
        state.amplitudes[self.right_ground] = b * c + mi * a;
    }
}

pub fn free_propagate(state: &mut PureState, dt: f64, scheme: &LevelScheme, rabi: f64) -> Result<()> {
    FreePropagator::new(scheme, rabi)?.propagate(state, dt);
    Ok(())
}

pub fn apply_collision(state: &mut PureState, kernel: &CollisionKernel) -> Result<()> {
    let mut scratch = Vec::with_capacity(kernel.dim());
    kernel.apply(&mut state.amplitudes, &mut scratch)
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleSpec {
    pub params: ModelParams,
    pub particles: usize,
    /// Strictly increasing sample times [s].
    pub t_grid: Vec<f64>,
    pub seed: u64,
}

impl EnsembleSpec {
    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        if self.particles == 0 {
            return Err(ZenoError::InvalidParameter { field: "particles", reason: "must be at least 1".into() });
        }
        validate_grid(&self.t_grid)
    }
}

pub(crate) fn validate_grid(t: &[f64]) -> Result<()> {
    if t.is_empty() || t[0] < 0.0 || t.iter().any(|x| !x.is_finite()) || t.windows(2).any(|w| w[1] <= w[0]) {
        return Err(ZenoError::BadTimeGrid);
    }
    Ok(())
}

/// Observables of one trajectory at every sample time.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryRecord {
    pub p_left: Vec<f64>,
    pub populations: Vec<Vec<f64>>,
    pub collisions: u64,
    /// Largest `|‖ψ‖² − 1|` seen at the sample times.
    pub norm_drift: f64,
}

/// Precomputed per-ensemble machinery shared by all trajectories.
#[derive(Debug, Clone)]
pub struct TrajectoryEngine {
    propagator: FreePropagator,
    kernel: CollisionKernel,
    params: ModelParams,
}

impl TrajectoryEngine {
    pub fn new(params: &ModelParams) -> Result<Self> {
        params.validate()?;
        let scheme = build_level_scheme(params, EnergyConvention::ShiftedGround);
        Ok(Self {
            propagator: FreePropagator::new(&scheme, params.rabi)?,
            kernel: CollisionKernel::from_params(params),
            params: *params,
        })
    }

    /// Runs trajectory `index` and hands the state to `record` at every
    /// sample time. Returns the number of collisions.
    pub fn run<R>(&self, seed: u64, index: u64, t_grid: &[f64], mut record: R) -> u64
    where
        R: FnMut(usize, &PureState),
    {
        let p = &self.params;
        let mut state = PureState::ground_left(p.n_left, p.n_right);
        let mut stream = PoissonStream::new(seed, index, p.tau);
        let mut scratch = Vec::with_capacity(p.n_left.max(p.n_right));
        let mut t = 0.0;
        let mut next_collision = stream.sample_interval();
        let mut collisions = 0;
        for (i, &ts) in t_grid.iter().enumerate() {
            while next_collision <= ts {
                self.propagator.propagate(&mut state, next_collision - t);
                t = next_collision;
                self.kernel
                    .apply(&mut state.amplitudes, &mut scratch)
                    .expect("kernel built from the same parameters");
                collisions += 1;
                next_collision += stream.sample_interval();
            }
            self.propagator.propagate(&mut state, ts - t);
            t = ts;
            record(i, &state);
        }
        collisions
    }
}

pub fn run_trajectory(spec: &EnsembleSpec, index: u64) -> Result<TrajectoryRecord> {
    spec.validate()?;
    let engine = TrajectoryEngine::new(&spec.params)?;
    let n = spec.t_grid.len();
    let mut p_left = Vec::with_capacity(n);
    let mut populations = Vec::with_capacity(n);
    let mut norm_drift = 0.0_f64;
    let collisions = engine.run(spec.seed, index, &spec.t_grid, |_, s| {
        p_left.push(s.p_left());
        populations.push(s.populations());
        norm_drift = norm_drift.max((s.norm_sqr() - 1.0).abs());
    });
    Ok(TrajectoryRecord { p_left, populations, collisions, norm_drift })
}

#[derive(Debug, Clone)]
struct Accumulator {
    count: usize,
    sum_pl: Vec<f64>,
    sum_pl_sq: Vec<f64>,
    sum_pop: Vec<Vec<f64>>,
    sum_mu: Vec<f64>,
    sum_second: Vec<f64>,
    norm_drift: f64,
    collisions: u64,
}

impl Accumulator {
    fn new(samples: usize, dim: usize) -> Self {
        Self {
            count: 0,
            sum_pl: vec![0.0; samples],
            sum_pl_sq: vec![0.0; samples],
            sum_pop: vec![vec![0.0; dim]; samples],
            sum_mu: vec![0.0; samples],
            sum_second: vec![0.0; samples],
            norm_drift: 0.0,
            collisions: 0,
        }
    }

    fn merge(&mut self, other: &Self) {
        self.count += other.count;
        for i in 0..self.sum_pl.len() {
            self.sum_pl[i] += other.sum_pl[i];
            self.sum_pl_sq[i] += other.sum_pl_sq[i];
            self.sum_mu[i] += other.sum_mu[i];
            self.sum_second[i] += other.sum_second[i];
            for (a, b) in self.sum_pop[i].iter_mut().zip(&other.sum_pop[i]) {
                *a += b;
            }
        }
        self.norm_drift = self.norm_drift.max(other.norm_drift);
        self.collisions += other.collisions;
    }
}

/// Ensemble statistics beyond the series itself.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnsembleDiagnostics {
    pub norm_drift: f64,
    pub mean_collisions: f64,
}

pub fn run_ensemble(spec: &EnsembleSpec) -> Result<SeriesResult> {
    run_ensemble_with_diagnostics(spec).map(|(s, _)| s)
}

pub fn run_ensemble_with_diagnostics(spec: &EnsembleSpec) -> Result<(SeriesResult, EnsembleDiagnostics)> {
    spec.validate()?;
    let engine = TrajectoryEngine::new(&spec.params)?;
    let samples = spec.t_grid.len();
    let dim = spec.params.dim();
    let n_left = spec.params.n_left;
    let chunks = spec.particles.div_ceil(CHUNK);

    let partials: Vec<Accumulator> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut acc = Accumulator::new(samples, dim);
            let lo = c * CHUNK;
            let hi = (lo + CHUNK).min(spec.particles);
            for index in lo..hi {
                acc.collisions += engine.run(spec.seed, index as u64, &spec.t_grid, |i, s| {
                    let pl = s.p_left();
                    acc.sum_pl[i] += pl;
                    acc.sum_pl_sq[i] += pl * pl;
                    let row = &mut acc.sum_pop[i];
                    let mut norm = 0.0;
                    let (mut mu, mut second) = (0.0, 0.0);
                    for (k, (slot, a)) in row.iter_mut().zip(&s.amplitudes).enumerate() {
                        let p = a.norm_sqr();
                        *slot += p;
                        norm += p;
                        if k < n_left {
                            let n = (k + 1) as f64;
                            mu += n * p;
                            second += n * n * p;
                        }
                    }
                    acc.sum_mu[i] += mu;
                    acc.sum_second[i] += second;
                    acc.norm_drift = acc.norm_drift.max((norm - 1.0).abs());
                });
                acc.count += 1;
            }
            acc
        })
        .collect();

    let mut total = Accumulator::new(samples, dim);
    for part in &partials {
        total.merge(part);
    }

    let m = total.count as f64;
    let p_left: Vec<f64> = total.sum_pl.iter().map(|s| s / m).collect();
    let p_left_stderr = (total.count > 1).then(|| {
        total
            .sum_pl
            .iter()
            .zip(&total.sum_pl_sq)
            .map(|(s, sq)| {
                let mean = s / m;
                let var = ((sq - m * mean * mean) / (m - 1.0)).max(0.0);
                (var / m).sqrt()
            })
            .collect()
    });
    let populations: Vec<Vec<f64>> = total
        .sum_pop
        .iter()
        .map(|row| row.iter().map(|x| x / m).collect())
        .collect();
    let mu_left = total.sum_mu.iter().map(|x| x / m).collect();
    let sigma_left = total.sum_second.iter().map(|x| (x / m).sqrt()).collect();

    let series = SeriesResult {
        t: spec.t_grid.clone(),
        rabi_period: spec.params.rabi_period(),
        n_left,
        p_left,
        p_left_stderr,
        populations: Some(populations),
        mu_left,
        sigma_left,
        coherence: None,
    };
    let diagnostics = EnsembleDiagnostics {
        norm_drift: total.norm_drift,
        mean_collisions: total.collisions as f64 / m,
    };
    Ok((series, diagnostics))
}

/// Convenience: moments of a recorded population vector.
pub fn record_moments(populations: &[f64], n_left: usize) -> (f64, f64) {
    left_moments(populations, n_left)
}
