//! Series comparison with declared tolerances.

use serde::{Deserialize, Serialize};
use zeno_core::series::{first_crossing, interpolate};
use zeno_core::SeriesResult;

use crate::error::{CliError, Result};

/// One observable on a time grid in Rabi periods.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Track {
    pub t_tr: Vec<f64>,
    pub value: Vec<f64>,
    pub stderr: Option<Vec<f64>>,
}

impl Track {
    pub fn p_left(series: &SeriesResult) -> Self {
        Self { t_tr: series.t_rabi(), value: series.p_left.clone(), stderr: series.p_left_stderr.clone() }
    }

    pub fn new(t_tr: Vec<f64>, value: Vec<f64>) -> Self {
        Self { t_tr, value, stderr: None }
    }

    fn resampled(&self, onto: &[f64]) -> Option<Self> {
        let value = onto.iter().map(|&t| interpolate(&self.t_tr, &self.value, t)).collect::<Option<Vec<_>>>()?;
        let stderr = match &self.stderr {
            Some(se) => Some(onto.iter().map(|&t| interpolate(&self.t_tr, se, t)).collect::<Option<Vec<_>>>()?),
            None => None,
        };
        Some(Self { t_tr: onto.to_vec(), value, stderr })
    }
}

/// Declared limits; absent entries are reported but not gated.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Tolerance {
    pub max_abs: Option<f64>,
    pub max_rel: Option<f64>,
    pub max_z: Option<f64>,
    /// Restrict metrics to `t_lo ≤ t ≤ t_hi` (Rabi periods).
    pub window: Option<(f64, f64)>,
    /// Interpolate the second series onto the first's grid.
    pub resample: bool,
    /// Fit stretched exponents relaxing towards this value.
    pub relax_to: Option<f64>,
}

impl std::str::FromStr for Tolerance {
    type Err = String;

    /// `abs=1e-3,rel=0.1,z=3,window=0.2:3,resample,relax=0.5`
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let mut tol = Tolerance::default();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (key, value) = part.split_once('=').unwrap_or((part, ""));
            let num = |v: &str| v.parse::<f64>().map_err(|_| format!("bad number '{v}' for '{key}'"));
            match key {
                "abs" => tol.max_abs = Some(num(value)?),
                "rel" => tol.max_rel = Some(num(value)?),
                "z" => tol.max_z = Some(num(value)?),
                "relax" => tol.relax_to = Some(num(value)?),
                "resample" => tol.resample = true,
                "window" => {
                    let (lo, hi) = value.split_once(':').ok_or("window needs lo:hi")?;
                    tol.window = Some((num(lo)?, num(hi)?));
                }
                _ => return Err(format!("unknown tolerance key '{key}'")),
            }
        }
        Ok(tol)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub value: f64,
    pub limit: f64,
    pub passed: bool,
}

/// Stretched-exponential summary of a relaxing series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RelaxationFit {
    /// Fitted `β` in `exp(−(t/T)^β)`.
    pub exponent: f64,
    /// `T` from the fit.
    pub fitted_time: f64,
    /// First `e⁻¹` crossing of the normalized excess.
    pub crossing_time: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub t_tr: Vec<f64>,
    pub max_abs_deviation: f64,
    pub max_rel_deviation: f64,
    pub z_scores: Option<Vec<f64>>,
    pub max_z: Option<f64>,
    pub relaxation: Option<(Option<RelaxationFit>, Option<RelaxationFit>)>,
    pub checks: Vec<Check>,
    pub passed: bool,
}

/// Normalized excess `(p − p∞)/(p(0) − p∞)`.
pub fn normalized_excess(value: &[f64], p_inf: f64) -> Vec<f64> {
    let p0 = value[0];
    value.iter().map(|v| (v - p_inf) / (p0 - p_inf)).collect()
}

/// First `e⁻¹` crossing of the normalized excess.
pub fn relaxation_time(t: &[f64], value: &[f64], p_inf: f64) -> Option<f64> {
    first_crossing(t, &normalized_excess(value, p_inf), (-1.0f64).exp())
}

/// Least-squares line through `ln(−ln excess)` against `ln t` over points with
/// excess in `(0.02, 0.98)`.
pub fn fit_stretched_exponent(t: &[f64], value: &[f64], p_inf: f64) -> Option<RelaxationFit> {
    let excess = normalized_excess(value, p_inf);
    let pts: Vec<(f64, f64)> = t
        .iter()
        .zip(&excess)
        .filter(|(t, e)| **t > 0.0 && **e > 0.02 && **e < 0.98)
        .map(|(t, e)| (t.ln(), (-e.ln()).ln()))
        .collect();
    if pts.len() < 3 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return None;
    }
    let beta = sxy / sxx;
    let intercept = my - beta * mx;
    Some(RelaxationFit {
        exponent: beta,
        fitted_time: (-intercept / beta).exp(),
        crossing_time: relaxation_time(t, value, p_inf),
    })
}

pub fn compare(a: &Track, b: &Track, tol: &Tolerance) -> Result<ComparisonReport> {
    let same_grid = a.t_tr.len() == b.t_tr.len()
        && a.t_tr.iter().zip(&b.t_tr).all(|(x, y)| (x - y).abs() <= 1e-12 * x.abs().max(y.abs()).max(1.0));
    let b = if same_grid {
        b.clone()
    } else if tol.resample {
        let lo = b.t_tr.first().copied().unwrap_or(f64::NAN);
        let hi = b.t_tr.last().copied().unwrap_or(f64::NAN);
        let slack = 1e-12 * lo.abs().max(hi.abs()).max(1.0);
        let overlap: Vec<f64> = a
            .t_tr
            .iter()
            .filter(|t| **t >= lo - slack && **t <= hi + slack)
            .map(|t| t.clamp(lo, hi))
            .collect();
        if overlap.is_empty() {
            return Err(CliError::Compare("grids do not overlap".into()));
        }
        let (Some(a_sub), Some(b_sub)) = (a.resampled(&overlap), b.resampled(&overlap)) else {
            return Err(CliError::Compare("grids do not overlap".into()));
        };
        return compare(&a_sub, &b_sub, &Tolerance { resample: false, ..tol.clone() });
    } else {
        return Err(CliError::Compare("time grids differ; pass resample to interpolate".into()));
    };

    let keep: Vec<usize> = (0..a.t_tr.len())
        .filter(|&i| tol.window.is_none_or(|(lo, hi)| a.t_tr[i] >= lo && a.t_tr[i] <= hi))
        .collect();
    if keep.is_empty() {
        return Err(CliError::Compare("no samples inside the window".into()));
    }

    let mut max_abs = 0.0_f64;
    let mut max_rel = 0.0_f64;
    for &i in &keep {
        let d = (a.value[i] - b.value[i]).abs();
        max_abs = max_abs.max(d);
        let scale = a.value[i].abs().max(b.value[i].abs());
        if scale > 0.0 {
            max_rel = max_rel.max(d / scale);
        }
    }

    let z_scores = match (&a.stderr, &b.stderr) {
        (None, None) => None,
        (sa, sb) => Some(
            keep.iter()
                .map(|&i| {
                    let var = sa.as_ref().map_or(0.0, |s| s[i] * s[i]) + sb.as_ref().map_or(0.0, |s| s[i] * s[i]);
                    let d = (a.value[i] - b.value[i]).abs();
                    if var > 0.0 {
                        d / var.sqrt()
                    } else if d <= 1e-12 {
                        0.0
                    } else {
                        f64::INFINITY
                    }
                })
                .collect::<Vec<_>>(),
        ),
    };
    let max_z = z_scores.as_ref().map(|z| z.iter().fold(0.0_f64, |m, v| m.max(*v)));

    let mut checks = Vec::new();
    if let Some(limit) = tol.max_abs {
        checks.push(Check { name: "max_abs", value: max_abs, limit, passed: max_abs <= limit });
    }
    if let Some(limit) = tol.max_rel {
        checks.push(Check { name: "max_rel", value: max_rel, limit, passed: max_rel <= limit });
    }
    if let Some(limit) = tol.max_z {
        let value = max_z.ok_or_else(|| CliError::Compare("z-scores require error bars on at least one series".into()))?;
        checks.push(Check { name: "max_z", value, limit, passed: value <= limit });
    }

    let t_kept: Vec<f64> = keep.iter().map(|&i| a.t_tr[i]).collect();
    let relaxation = tol.relax_to.map(|p_inf| {
        (fit_stretched_exponent(&a.t_tr, &a.value, p_inf), fit_stretched_exponent(&b.t_tr, &b.value, p_inf))
    });
    let passed = checks.iter().all(|c| c.passed);
    Ok(ComparisonReport {
        t_tr: t_kept,
        max_abs_deviation: max_abs,
        max_rel_deviation: max_rel,
        z_scores,
        max_z,
        relaxation,
        checks,
        passed,
    })
}
