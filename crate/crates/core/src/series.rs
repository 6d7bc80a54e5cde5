//! Time series of observables shared by every engine.

use serde::Serialize;

/// Observables sampled on a common time grid.
///
/// Times are in seconds; `rabi_period` converts to Rabi periods.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeriesResult {
    pub t: Vec<f64>,
    pub rabi_period: f64,
    pub n_left: usize,
    /// Total population of the left ladder, `P_L`.
    pub p_left: Vec<f64>,
    /// Standard error of `p_left`; absent for deterministic engines and for
    /// single-trajectory ensembles.
    pub p_left_stderr: Option<Vec<f64>>,
    /// Per-sample populations in state order `1_L..N_L, 1_R..N_R`.
    pub populations: Option<Vec<Vec<f64>>>,
    /// `μ_L = Σ n p_{n_L}` (one-based `n`).
    pub mu_left: Vec<f64>,
    /// `σ_L = (Σ n² p_{n_L})^{1/2}`.
    pub sigma_left: Vec<f64>,
    /// Coherence `p^c = −2 Im ρ_{1_L 1_R}` when the engine tracks it.
    pub coherence: Option<Vec<f64>>,
}

impl SeriesResult {
    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    pub fn t_rabi(&self) -> Vec<f64> {
        self.t.iter().map(|t| t / self.rabi_period).collect()
    }

    pub fn p_right(&self) -> Vec<f64> {
        self.p_left.iter().map(|p| 1.0 - p).collect()
    }

    /// Ground populations `(p_{1_L}, p_{1_R})` per sample.
    pub fn ground_populations(&self) -> Option<Vec<(f64, f64)>> {
        let pops = self.populations.as_ref()?;
        Some(pops.iter().map(|p| (p[0], p[self.n_left])).collect())
    }
}

/// Left-ladder moments `(μ, σ)` of a population vector in state order.
pub fn left_moments(populations: &[f64], n_left: usize) -> (f64, f64) {
    let (mut mu, mut second) = (0.0, 0.0);
    for (i, p) in populations[..n_left].iter().enumerate() {
        let n = (i + 1) as f64;
        mu += n * p;
        second += n * n * p;
    }
    (mu, second.max(0.0).sqrt())
}

/// First time the linearly interpolated series crosses `level` from above.
pub fn first_crossing(t: &[f64], y: &[f64], level: f64) -> Option<f64> {
    for i in 1..t.len() {
        if y[i - 1] > level && y[i] <= level {
            let frac = (y[i - 1] - level) / (y[i - 1] - y[i]);
            return Some(t[i - 1] + frac * (t[i] - t[i - 1]));
        }
    }
    None
}

/// Linear interpolation of `(xs, ys)` at `x`; `None` outside the grid.
pub fn interpolate(xs: &[f64], ys: &[f64], x: f64) -> Option<f64> {
    if xs.is_empty() || x < xs[0] || x > *xs.last()? {
        return None;
    }
    let i = xs.partition_point(|&v| v < x);
    if i == 0 {
        return Some(ys[0]);
    }
    let (x0, x1) = (xs[i - 1], xs[i]);
    let w = (x - x0) / (x1 - x0);
    Some(ys[i - 1] + w * (ys[i] - ys[i - 1]))
}

/// Evenly spaced grid of `samples` points on `[0, t_max]`.
pub fn uniform_grid(t_max: f64, samples: usize) -> Vec<f64> {
    match samples {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => (0..samples).map(|i| t_max * i as f64 / (samples - 1) as f64).collect(),
    }
}
