//! Populations plus the ground-pair coherence.

use num_complex::Complex64;

use super::{GeneratorMode, GeneratorSpec};
use crate::error::{Result, ZenoError};
use crate::ode::Dopri5;
use crate::series::{left_moments, SeriesResult};
use crate::trajectory::validate_grid;

#[derive(Debug, Clone, PartialEq)]
pub struct ReducedState {
    pub p_left: Vec<f64>,
    pub p_right: Vec<f64>,
    /// `ρ_{1_L 1_R}`.
    pub coherence: Complex64,
}

impl ReducedState {
    pub fn ground_left(n_left: usize, n_right: usize) -> Self {
        let mut p_left = vec![0.0; n_left];
        p_left[0] = 1.0;
        Self { p_left, p_right: vec![0.0; n_right], coherence: Complex64::new(0.0, 0.0) }
    }

    /// `p^c = −2 Im ρ_{1_L 1_R}`.
    pub fn p_c(&self) -> f64 {
        -2.0 * self.coherence.im
    }

    pub fn total(&self) -> f64 {
        self.p_left.iter().sum::<f64>() + self.p_right.iter().sum::<f64>()
    }

    /// Checks non-negativity, normalisation and the coherence bound.
    pub fn check(&self) -> Result<()> {
        if self.p_left.iter().chain(&self.p_right).any(|&p| p < -1e-10) {
            return Err(ZenoError::OutOfRange("negative population".into()));
        }
        if (self.total() - 1.0).abs() > 1e-10 {
            return Err(ZenoError::OutOfRange(format!("total population {}", self.total())));
        }
        if self.coherence.norm_sqr() > self.p_left[0] * self.p_right[0] + 1e-8 {
            return Err(ZenoError::OutOfRange("coherence exceeds population bound".into()));
        }
        Ok(())
    }

    fn to_vec(&self) -> Vec<f64> {
        let mut v = Vec::with_capacity(self.p_left.len() + self.p_right.len() + 2);
        v.extend_from_slice(&self.p_left);
        v.extend_from_slice(&self.p_right);
        v.push(self.coherence.re);
        v.push(self.coherence.im);
        v
    }

    fn from_slice(y: &[f64], n_left: usize) -> Self {
        let n = y.len() - 2;
        Self {
            p_left: y[..n_left].to_vec(),
            p_right: y[n_left..n].to_vec(),
            coherence: Complex64::new(y[n], y[n + 1]),
        }
    }
}

/// Reflecting tridiagonal diffusion on one ladder.
fn chain(p: &[f64], d: f64, dp: &mut [f64]) {
    let n = p.len();
    for i in 0..n {
        let mut flow = 0.0;
        if i > 0 {
            flow += p[i - 1] - p[i];
        }
        if i + 1 < n {
            flow += p[i + 1] - p[i];
        }
        dp[i] = d * flow;
    }
}

fn rhs_into(y: &[f64], dy: &mut [f64], n_left: usize, d_left: f64, d_right: f64, rabi: f64) {
    let n = y.len() - 2;
    chain(&y[..n_left], d_left, &mut dy[..n_left]);
    chain(&y[n_left..n], d_right, &mut dy[n_left..n]);
    let (re, im) = (y[n], y[n + 1]);
    let p_c = -2.0 * im;
    dy[0] += rabi * p_c;
    dy[n_left] -= rabi * p_c;
    let damping = 0.5 * (d_left + d_right);
    dy[n] = -damping * re;
    dy[n + 1] = -damping * im - rabi * (y[n_left] - y[0]);
}

fn check_shape(state: &ReducedState, spec: &GeneratorSpec) -> Result<()> {
    let p = &spec.params;
    if state.p_left.len() != p.n_left {
        return Err(ZenoError::DimensionMismatch { expected: p.n_left, found: state.p_left.len() });
    }
    if state.p_right.len() != p.n_right {
        return Err(ZenoError::DimensionMismatch { expected: p.n_right, found: state.p_right.len() });
    }
    Ok(())
}

pub fn reduced_rhs(state: &ReducedState, spec: &GeneratorSpec) -> Result<ReducedState> {
    spec.require(&[GeneratorMode::Reduced, GeneratorMode::ChainsOnly])?;
    check_shape(state, spec)?;
    let p = &spec.params;
    let y = state.to_vec();
    let mut dy = vec![0.0; y.len()];
    rhs_into(&y, &mut dy, p.n_left, p.diffusion_left(), p.diffusion_right(), spec.rabi());
    Ok(ReducedState::from_slice(&dy, p.n_left))
}

/// Integrates from `state0` at `t = 0` and samples on `t_grid` (seconds).
pub fn integrate_reduced(state0: &ReducedState, spec: &GeneratorSpec, t_grid: &[f64]) -> Result<SeriesResult> {
    spec.require(&[GeneratorMode::Reduced, GeneratorMode::ChainsOnly])?;
    check_shape(state0, spec)?;
    validate_grid(t_grid)?;
    let p = &spec.params;
    let (nl, dl, dr, rabi) = (p.n_left, p.diffusion_left(), p.diffusion_right(), spec.rabi());
    let n = p.dim();

    let samples = t_grid.len();
    let mut p_left = Vec::with_capacity(samples);
    let mut populations = Vec::with_capacity(samples);
    let mut mu_left = Vec::with_capacity(samples);
    let mut sigma_left = Vec::with_capacity(samples);
    let mut coherence = Vec::with_capacity(samples);
    Dopri5::with_tolerances(1e-9, 1e-13).integrate(
        |_, y, dy| rhs_into(y, dy, nl, dl, dr, rabi),
        0.0,
        &state0.to_vec(),
        t_grid,
        |_, _, y| {
            let pops = &y[..n];
            p_left.push(pops[..nl].iter().sum());
            let (mu, sigma) = left_moments(pops, nl);
            mu_left.push(mu);
            sigma_left.push(sigma);
            coherence.push(-2.0 * y[n + 1]);
            populations.push(pops.to_vec());
        },
    )?;
    Ok(SeriesResult {
        t: t_grid.to_vec(),
        rabi_period: p.rabi_period(),
        n_left: nl,
        p_left,
        p_left_stderr: None,
        populations: Some(populations),
        mu_left,
        sigma_left,
        coherence: Some(coherence),
    })
}
