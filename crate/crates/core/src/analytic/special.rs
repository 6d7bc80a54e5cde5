//! Exponentially scaled modified Bessel functions and the imaginary error
//! function.

use std::f64::consts::PI;

use crate::error::{Result, ZenoError};

const SERIES_MAX_ARG: f64 = 50.0;
const HANKEL_MIN_ARG: f64 = 500.0;
const RESCALE_ABOVE: f64 = 1e200;

/// `e^{−t} I_n(t)` for `t ≥ 0`.
///
/// Power series below `t = 50`, Hankel's large-argument expansion when
/// `t ≥ 500` and `n² ≤ t`, Miller's backward recurrence otherwise.
pub fn bessel_i_scaled(n: u32, t: f64) -> f64 {
    assert!(t >= 0.0 && !t.is_nan(), "argument must be non-negative, got {t}");
    if t == 0.0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    if t <= SERIES_MAX_ARG {
        return series(n, t);
    }
    if t >= HANKEL_MIN_ARG && (n as f64).powi(2) <= t {
        if let Some(v) = hankel(n, t) {
            return v;
        }
    }
    miller(n, t, None)
}

/// `e^{−t} I_k(t)` for `k = 0..=n_max`.
pub fn bessel_i_scaled_seq(n_max: u32, t: f64) -> Vec<f64> {
    assert!(t >= 0.0 && !t.is_nan(), "argument must be non-negative, got {t}");
    if t <= SERIES_MAX_ARG {
        return (0..=n_max).map(|k| bessel_i_scaled(k, t)).collect();
    }
    let mut out = vec![0.0; n_max as usize + 1];
    miller(n_max, t, Some(&mut out));
    out
}

fn series(n: u32, t: f64) -> f64 {
    let half = 0.5 * t;
    let mut log_first = n as f64 * half.ln() - t;
    for j in 2..=n {
        log_first -= (j as f64).ln();
    }
    let first = log_first.exp();
    if first == 0.0 {
        return 0.0;
    }
    let q = half * half;
    let (mut term, mut sum) = (first, first);
    let mut k = 0.0;
    loop {
        k += 1.0;
        term *= q / (k * (n as f64 + k));
        sum += term;
        if term <= sum * 1e-17 {
            return sum;
        }
    }
}

fn hankel(n: u32, t: f64) -> Option<f64> {
    let mu = 4.0 * (n as f64).powi(2);
    let (mut term, mut sum) = (1.0_f64, 1.0_f64);
    for k in 1..60 {
        let odd = (2 * k - 1) as f64;
        let next = -term * (mu - odd * odd) / (k as f64 * 8.0 * t);
        if next.abs() > term.abs() && term != 0.0 {
            return None;
        }
        term = next;
        sum += term;
        if term.abs() <= 1e-16 * sum.abs() {
            return Some(sum / (2.0 * PI * t).sqrt());
        }
    }
    None
}

/// Backward recurrence normalised by `e^{−t}(I₀ + 2ΣI_k) = 1`. Fills `seq`
/// with orders `0..=n` when given, otherwise returns order `n`.
fn miller(n: u32, t: f64, mut seq: Option<&mut [f64]>) -> f64 {
    let top = n as usize + (80.0 * t.max(1.0)).sqrt().ceil() as usize + 40;
    let (mut above, mut cur) = (0.0_f64, 1e-300_f64);
    let mut norm = 0.0;
    let mut at_n = 0.0;
    for k in (1..=top).rev() {
        let below = above + (2.0 * k as f64 / t) * cur;
        above = cur;
        cur = below;
        let order = k - 1;
        if order == n as usize {
            at_n = cur;
        }
        if let Some(s) = seq.as_deref_mut() {
            if order <= n as usize {
                s[order] = cur;
            }
        }
        norm += if order == 0 { cur } else { 2.0 * cur };
        if cur > RESCALE_ABOVE {
            let f = 1.0 / RESCALE_ABOVE;
            above *= f;
            cur *= f;
            norm *= f;
            at_n *= f;
            if let Some(s) = seq.as_deref_mut() {
                for v in s.iter_mut().skip(order) {
                    *v *= f;
                }
            }
        }
    }
    if let Some(s) = seq {
        for v in s.iter_mut() {
            *v /= norm;
        }
    }
    at_n / norm
}

const ERFI_SERIES_MAX: f64 = 6.0;
/// Largest `z` with `e^{z²}` comfortably inside `f64`.
pub const ERFI_MAX_ARG: f64 = 26.0;

/// `Φ(z) = (2/√π)∫₀^z e^{s²} ds`. Errors where `e^{z²}` would overflow.
pub fn erfi(z: f64) -> Result<f64> {
    if z.abs() > ERFI_MAX_ARG || z.is_nan() {
        return Err(ZenoError::OutOfRange(format!("erfi argument {z} exceeds ±{ERFI_MAX_ARG}")));
    }
    if z.abs() <= ERFI_SERIES_MAX {
        return Ok(erfi_series(z));
    }
    Ok(erfi_scaled(z) * (z * z).exp())
}

/// `e^{−z²} Φ(z)`, finite for every real `z`.
pub fn erfi_scaled(z: f64) -> f64 {
    if z < 0.0 {
        return -erfi_scaled(-z);
    }
    if z <= ERFI_SERIES_MAX {
        return (-z * z).exp() * erfi_series(z);
    }
    // Dawson asymptotic: F(z) ~ (1/2z) Σ (2k−1)!!/(2z²)^k
    let inv = 1.0 / (2.0 * z * z);
    let (mut term, mut sum) = (1.0_f64, 1.0_f64);
    for k in 1..200 {
        let next = term * (2 * k - 1) as f64 * inv;
        if next > term {
            break;
        }
        term = next;
        sum += term;
        if term < 1e-17 * sum {
            break;
        }
    }
    sum / (z * PI.sqrt())
}

fn erfi_series(z: f64) -> f64 {
    let z2 = z * z;
    let (mut power, mut sum) = (z, z);
    let mut k = 0.0;
    loop {
        k += 1.0;
        power *= z2 / k;
        let term = power / (2.0 * k + 1.0);
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() {
            return 2.0 / PI.sqrt() * sum;
        }
    }
}
