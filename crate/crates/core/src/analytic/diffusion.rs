//! Free and reflected random walks on the rotational ladder.

use std::f64::consts::PI;

use super::special::{bessel_i_scaled, bessel_i_scaled_seq};
use crate::error::{Result, ZenoError};

/// `q_n(t) = e^{−2t} I_{|n−1|}(2t)`, the walk on ℤ started at `n = 1`.
pub fn walk_probability(n: i64, t: f64) -> f64 {
    bessel_i_scaled((n - 1).unsigned_abs() as u32, 2.0 * t)
}

/// `p_n = q_n + q_{1−n}` on the half-line `n ≥ 1` with reflection at `n = 1`.
pub fn halfline_population(n: u32, dt: f64) -> f64 {
    assert!(n >= 1, "levels are one-based");
    bessel_i_scaled(n - 1, 2.0 * dt) + bessel_i_scaled(n, 2.0 * dt)
}

/// Ground-level population `e^{−2Dt}[I₀ + I₁](2Dt)`.
pub fn ground_population(dt: f64) -> f64 {
    halfline_population(1, dt)
}

/// `p_1..p_{n_max}` in one pass.
pub fn halfline_populations(n_max: u32, dt: f64) -> Vec<f64> {
    let s = bessel_i_scaled_seq(n_max, 2.0 * dt);
    s.windows(2).map(|w| w[0] + w[1]).collect()
}

/// Number of levels carrying all but roughly `1e−16` of the probability.
pub fn support_size(dt: f64) -> u32 {
    (160.0 * dt.max(0.5)).sqrt().ceil() as u32 + 40
}

/// Populations truncated adaptively so that they sum to one.
pub fn halfline_distribution(dt: f64) -> Vec<f64> {
    halfline_populations(support_size(dt), dt)
}

/// `(μ, σ²)` with `μ = ⟨n⟩` and `σ² = ⟨n²⟩` over the level index.
pub fn moments(dt: f64) -> (f64, f64) {
    let z = dt;
    let (s0, s1) = (bessel_i_scaled(0, 2.0 * z), bessel_i_scaled(1, 2.0 * z));
    let mu = 0.5 + 0.5 * ((1.0 + 4.0 * z) * s0 + 4.0 * z * s1);
    (mu, 2.0 * z + mu)
}

/// Leading behaviour for `Dt ≫ 1`: `(μ, σ) ≈ (√(4Dt/π), √(2Dt))`.
pub fn moments_large(dt: f64) -> (f64, f64) {
    ((4.0 * dt / PI).sqrt(), (2.0 * dt).sqrt())
}

/// Gaussian envelope `(4πt)^{−1/2} exp(−(n−1)²/4t)` of the free walk.
pub fn walk_gaussian(n: i64, t: f64) -> f64 {
    let d = (n - 1) as f64;
    (-d * d / (4.0 * t)).exp() / (4.0 * PI * t).sqrt()
}

/// Stable population split `α_L/(α_L + α_R)`.
pub fn equilibrium_pl(alpha_left: f64, alpha_right: f64) -> Result<f64> {
    if alpha_left < 0.0 || alpha_right < 0.0 {
        return Err(ZenoError::InvalidParameter { field: "alpha", reason: "couplings must be non-negative".into() });
    }
    if alpha_left + alpha_right == 0.0 {
        return Err(ZenoError::InvalidParameter { field: "alpha", reason: "at least one coupling must be nonzero".into() });
    }
    Ok(alpha_left / (alpha_left + alpha_right))
}

/// Quadratic onset `1 − Ω²t²` of the Rabi oscillation.
pub fn short_time_pl(t: f64, rabi: f64) -> f64 {
    1.0 - (rabi * t).powi(2)
}
