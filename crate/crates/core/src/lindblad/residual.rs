//! Finite-difference check of `P̈_L + D̄Ṗ_L + 2Ω²(p_{1_L} − p_{1_R}) = 0`.

use crate::error::{Result, ZenoError};
use crate::model::ModelParams;
use crate::series::SeriesResult;

/// Largest `Ω Δt` accepted; second differences are unreliable beyond.
pub const MAX_RABI_STEP: f64 = 0.03;

#[derive(Debug, Clone, PartialEq)]
pub struct ResidualTrack {
    /// Interior sample times [s].
    pub t: Vec<f64>,
    pub residual: Vec<f64>,
    /// `Ω²`, the natural scale of the residual.
    pub scale: f64,
}

impl ResidualTrack {
    pub fn max_abs(&self) -> f64 {
        self.residual.iter().fold(0.0, |m, r| m.max(r.abs()))
    }
}

/// Residual at every interior point of a uniform grid.
pub fn second_order_pl_residual(series: &SeriesResult, params: &ModelParams) -> Result<ResidualTrack> {
    let ground = series.ground_populations().ok_or(ZenoError::MissingObservable("populations"))?;
    let t = &series.t;
    if t.len() < 3 {
        return Err(ZenoError::CoarseGrid("need at least three samples".into()));
    }
    let dt = t[1] - t[0];
    if t.windows(2).any(|w| ((w[1] - w[0]) - dt).abs() > 1e-9 * dt) {
        return Err(ZenoError::CoarseGrid("grid must be uniform".into()));
    }
    let rabi = params.rabi;
    let damping = params.diffusion_mean();
    if rabi * dt > MAX_RABI_STEP || damping * dt > MAX_RABI_STEP {
        return Err(ZenoError::CoarseGrid(format!(
            "step {dt:e} s too coarse: Ω·Δt = {:.3}, D̄·Δt = {:.3}, limit {MAX_RABI_STEP}",
            rabi * dt,
            damping * dt
        )));
    }
    let p = &series.p_left;
    let mut out_t = Vec::with_capacity(t.len() - 2);
    let mut residual = Vec::with_capacity(t.len() - 2);
    for i in 1..t.len() - 1 {
        let second = (p[i + 1] - 2.0 * p[i] + p[i - 1]) / (dt * dt);
        let first = (p[i + 1] - p[i - 1]) / (2.0 * dt);
        let (pl, pr) = ground[i];
        out_t.push(t[i]);
        residual.push(second + damping * first + 2.0 * rabi * rabi * (pl - pr));
    }
    Ok(ResidualTrack { t: out_t, residual, scale: rabi * rabi })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lindblad::{integrate_reduced, GeneratorMode, GeneratorSpec, ReducedState};

    fn params() -> ModelParams {
        ModelParams { n_left: 20, n_right: 20, ..ModelParams::default() }
    }

    #[test]
    fn reduced_solution_satisfies_identity() {
        let p = params();
        let spec = GeneratorSpec::new(GeneratorMode::Reduced, p).unwrap();
        let dt = 0.02 / p.diffusion_mean();
        let t: Vec<f64> = (0..3000).map(|i| i as f64 * dt).collect();
        let series = integrate_reduced(&ReducedState::ground_left(20, 20), &spec, &t).unwrap();
        let r = second_order_pl_residual(&series, &p).unwrap();
        assert!(r.max_abs() <= 1e-4 * r.scale, "{} vs {}", r.max_abs(), r.scale);
    }

    #[test]
    fn violating_series_is_flagged() {
        let p = params();
        let dt = 0.02 / p.diffusion_mean();
        let t: Vec<f64> = (0..100).map(|i| i as f64 * dt).collect();
        let pl: Vec<f64> = t.iter().map(|s| (-p.rabi * s).exp()).collect();
        let pops: Vec<Vec<f64>> = pl
            .iter()
            .map(|&v| {
                let mut row = vec![0.0; 40];
                row[0] = v;
                row[20] = 1.0 - v;
                row
            })
            .collect();
        let series = SeriesResult {
            t,
            rabi_period: p.rabi_period(),
            n_left: 20,
            p_left: pl,
            p_left_stderr: None,
            populations: Some(pops),
            mu_left: vec![],
            sigma_left: vec![],
            coherence: None,
        };
        let r = second_order_pl_residual(&series, &p).unwrap();
        assert!(r.max_abs() > 0.1 * r.scale);
    }

    #[test]
    fn refuses_coarse_or_incomplete_series() {
        let p = params();
        let spec = GeneratorSpec::new(GeneratorMode::Reduced, p).unwrap();
        let t: Vec<f64> = (0..10).map(|i| i as f64 * 0.5 / p.rabi).collect();
        let mut series = integrate_reduced(&ReducedState::ground_left(20, 20), &spec, &t).unwrap();
        assert!(matches!(second_order_pl_residual(&series, &p), Err(ZenoError::CoarseGrid(_))));
        series.populations = None;
        assert!(matches!(second_order_pl_residual(&series, &p), Err(ZenoError::MissingObservable(_))));
    }

    #[test]
    fn constant_series_without_rabi() {
        let p = ModelParams { rabi: 1e-12, ..params() };
        let t: Vec<f64> = (0..50).map(|i| i as f64 * 1e-6).collect();
        let mut row = vec![0.0; 40];
        row[0] = 0.7;
        row[3] = 0.3;
        let series = SeriesResult {
            t,
            rabi_period: p.rabi_period(),
            n_left: 20,
            p_left: vec![1.0; 50],
            p_left_stderr: None,
            populations: Some(vec![row; 50]),
            mu_left: vec![],
            sigma_left: vec![],
            coherence: None,
        };
        let r = second_order_pl_residual(&series, &p).unwrap();
        assert!(r.max_abs() < 1e-20);
    }
}
