//! Dominant rotation frequency of a sampled complex signal.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Result, ZenoError};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralPeak {
    /// Angular frequency of the strongest bin [rad/s]; positive for
    /// `e^{+iωt}` rotation.
    pub omega: f64,
    /// Bin spacing [rad/s].
    pub resolution: f64,
    pub magnitude: f64,
}

/// Hann-windowed FFT peak, ignoring bins with `|ω| < min_omega`.
pub fn dominant_frequency(samples: &[Complex64], dt: f64, min_omega: f64) -> Result<SpectralPeak> {
    let n = samples.len();
    if n < 8 || dt.is_nan() || dt <= 0.0 {
        return Err(ZenoError::CoarseGrid(format!("need ≥ 8 uniform samples, got {n}")));
    }
    let mut buf: Vec<Complex64> = samples
        .iter()
        .enumerate()
        .map(|(k, s)| s * (0.5 - 0.5 * (2.0 * PI * k as f64 / n as f64).cos()))
        .collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    // forward kernel e^{−2πikm/n}: e^{+iωt} peaks at bin ωn·dt/2π
    let resolution = 2.0 * PI / (n as f64 * dt);
    let omega_of = |k: usize| {
        let signed = if k <= n / 2 { k as f64 } else { k as f64 - n as f64 };
        signed * resolution
    };
    let (k, mag) = buf
        .iter()
        .enumerate()
        .filter(|(k, _)| omega_of(*k).abs() >= min_omega)
        .map(|(k, c)| (k, c.norm()))
        .fold((usize::MAX, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
    if k == usize::MAX {
        return Err(ZenoError::OutOfRange("no bins above the cutoff".into()));
    }
    Ok(SpectralPeak { omega: omega_of(k), resolution, magnitude: mag })
}
