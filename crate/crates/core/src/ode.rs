//! Dormand–Prince 5(4) integrator with continuous output.
//!
//! Works on flat `f64` state slices. Output times are served from the
//! 4th-order dense interpolant of each accepted step, so the step sequence
//! does not depend on the sampling grid.

use crate::error::{Result, ZenoError};

const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const A2: [f64; 1] = [0.2];
const A3: [f64; 2] = [3.0 / 40.0, 9.0 / 40.0];
const A4: [f64; 3] = [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0];
const A5: [f64; 4] = [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0];
const A6: [f64; 5] = [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0];
// 5th-order weights; k2 weight is zero
const B: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];
const D: [f64; 7] = [
    -12715105075.0 / 11282082432.0,
    0.0,
    87487479700.0 / 32700410799.0,
    -10690763975.0 / 1880347072.0,
    701980252875.0 / 199316789632.0,
    -1453857185.0 / 822651844.0,
    69997945.0 / 29380423.0,
];

#[derive(Debug, Clone, Copy)]
pub struct Dopri5 {
    pub rtol: f64,
    pub atol: f64,
    pub h_max: f64,
    pub h_init: Option<f64>,
    pub max_steps: usize,
    pub safety: f64,
    pub fac_min: f64,
    pub fac_max: f64,
}

impl Default for Dopri5 {
    fn default() -> Self {
        Self {
            rtol: 1e-8,
            atol: 1e-12,
            h_max: f64::INFINITY,
            h_init: None,
            max_steps: 10_000_000,
            safety: 0.9,
            fac_min: 0.2,
            fac_max: 10.0,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OdeStats {
    pub accepted: usize,
    pub rejected: usize,
    pub evaluations: usize,
}

impl Dopri5 {
    pub fn with_tolerances(rtol: f64, atol: f64) -> Self {
        Self { rtol, atol, ..Self::default() }
    }

    /// Integrates `y' = f(t, y)` from `(t0, y0)` and reports the state at
    /// every time in `t_out` through `observe(index, t, y)`.
    ///
    /// `t_out` must be non-decreasing with `t_out[0] >= t0`.
    pub fn integrate<F, O>(&self, f: F, t0: f64, y0: &[f64], t_out: &[f64], observe: O) -> Result<OdeStats>
    where
        F: FnMut(f64, &[f64], &mut [f64]),
        O: FnMut(usize, f64, &[f64]),
    {
        self.integrate_projected(f, |_| false, t0, y0, t_out, observe)
    }

    /// Like [`integrate`](Self::integrate), with `project` applied to the state
    /// after every accepted step. `project` returns `true` when it modified
    /// the state, in which case the derivative at the step end is recomputed.
    pub fn integrate_projected<F, P, O>(
        &self,
        mut f: F,
        mut project: P,
        t0: f64,
        y0: &[f64],
        t_out: &[f64],
        mut observe: O,
    ) -> Result<OdeStats>
    where
        F: FnMut(f64, &[f64], &mut [f64]),
        P: FnMut(&mut [f64]) -> bool,
        O: FnMut(usize, f64, &[f64]),
    {
        if t_out.is_empty() {
            return Ok(OdeStats::default());
        }
        if t_out[0] < t0 || t_out.windows(2).any(|w| w[1] < w[0]) {
            return Err(ZenoError::BadTimeGrid);
        }
        let n = y0.len();
        let t_end = *t_out.last().unwrap();
        let mut stats = OdeStats::default();
        let mut y = y0.to_vec();
        let mut next_out = 0;
        while next_out < t_out.len() && t_out[next_out] == t0 {
            observe(next_out, t0, &y);
            next_out += 1;
        }
        if next_out == t_out.len() {
            return Ok(stats);
        }

        let mut k: [Vec<f64>; 7] = std::array::from_fn(|_| vec![0.0; n]);
        let mut y_stage = vec![0.0; n];
        let mut y_new = vec![0.0; n];
        let mut err = vec![0.0; n];
        let mut cont: [Vec<f64>; 5] = std::array::from_fn(|_| vec![0.0; n]);
        let mut y_interp = vec![0.0; n];

        f(t0, &y, &mut k[0]);
        stats.evaluations += 1;
        let mut t = t0;
        let mut h = match self.h_init {
            Some(h) => h,
            None => self.initial_step(&mut f, t0, &y, &k[0], t_end - t0, &mut stats),
        }
        .min(self.h_max)
        .min(t_end - t0);
        let mut reject_last = false;

        while next_out < t_out.len() {
            if stats.accepted + stats.rejected >= self.max_steps {
                return Err(ZenoError::StepLimit(self.max_steps));
            }
            if t + h == t || h <= 0.0 {
                return Err(ZenoError::StepUnderflow(t));
            }
            if t + h > t_end {
                h = t_end - t;
            }

            stage(&mut y_stage, &y, h, &k, &A2);
            f(t + C[1] * h, &y_stage, &mut k[1]);
            stage(&mut y_stage, &y, h, &k, &A3);
            f(t + C[2] * h, &y_stage, &mut k[2]);
            stage(&mut y_stage, &y, h, &k, &A4);
            f(t + C[3] * h, &y_stage, &mut k[3]);
            stage(&mut y_stage, &y, h, &k, &A5);
            f(t + C[4] * h, &y_stage, &mut k[4]);
            stage(&mut y_stage, &y, h, &k, &A6);
            f(t + h, &y_stage, &mut k[5]);
            for i in 0..n {
                y_new[i] = y[i]
                    + h * (B[0] * k[0][i] + B[2] * k[2][i] + B[3] * k[3][i] + B[4] * k[4][i] + B[5] * k[5][i]);
            }
            f(t + h, &y_new, &mut k[6]);
            stats.evaluations += 6;

            let mut acc = 0.0;
            for i in 0..n {
                let e = h
                    * (E[0] * k[0][i]
                        + E[2] * k[2][i]
                        + E[3] * k[3][i]
                        + E[4] * k[4][i]
                        + E[5] * k[5][i]
                        + E[6] * k[6][i]);
                err[i] = e;
                let scale = self.atol + self.rtol * y[i].abs().max(y_new[i].abs());
                acc = f64::max(acc, (e / scale).abs());
            }
            // max norm: sparse states would dilute an RMS norm
            let err_norm = acc;

            let fac = if err_norm == 0.0 {
                self.fac_max
            } else {
                (self.safety * err_norm.powf(-0.2)).clamp(self.fac_min, self.fac_max)
            };

            if err_norm <= 1.0 {
                stats.accepted += 1;
                let t_new = t + h;
                // continuous extension coefficients
                for i in 0..n {
                    let dy = y_new[i] - y[i];
                    let bspl = h * k[0][i] - dy;
                    cont[0][i] = y[i];
                    cont[1][i] = dy;
                    cont[2][i] = bspl;
                    cont[3][i] = dy - h * k[6][i] - bspl;
                    cont[4][i] = h
                        * (D[0] * k[0][i]
                            + D[2] * k[2][i]
                            + D[3] * k[3][i]
                            + D[4] * k[4][i]
                            + D[5] * k[5][i]
                            + D[6] * k[6][i]);
                }
                while next_out < t_out.len() && t_out[next_out] <= t_new {
                    let to = t_out[next_out];
                    if to == t_new {
                        observe(next_out, to, &y_new);
                    } else {
                        let theta = (to - t) / h;
                        let theta1 = 1.0 - theta;
                        for i in 0..n {
                            y_interp[i] = cont[0][i]
                                + theta
                                    * (cont[1][i]
                                        + theta1 * (cont[2][i] + theta * (cont[3][i] + theta1 * cont[4][i])));
                        }
                        observe(next_out, to, &y_interp);
                    }
                    next_out += 1;
                }
                y.copy_from_slice(&y_new);
                t = t_new;
                if project(&mut y) {
                    f(t, &y, &mut k[0]);
                    stats.evaluations += 1;
                } else {
                    k.swap(0, 6);
                }
                let fac = if reject_last { fac.min(1.0) } else { fac };
                h = (h * fac).min(self.h_max);
                reject_last = false;
            } else {
                stats.rejected += 1;
                reject_last = true;
                h *= fac.min(1.0);
            }
        }
        Ok(stats)
    }

    fn initial_step<F>(&self, f: &mut F, t0: f64, y0: &[f64], f0: &[f64], span: f64, stats: &mut OdeStats) -> f64
    where
        F: FnMut(f64, &[f64], &mut [f64]),
    {
        let n = y0.len().max(1) as f64;
        let scale: Vec<f64> = y0.iter().map(|y| self.atol + self.rtol * y.abs()).collect();
        let d0 = (y0.iter().zip(&scale).map(|(y, s)| (y / s).powi(2)).sum::<f64>() / n).sqrt();
        let d1 = (f0.iter().zip(&scale).map(|(y, s)| (y / s).powi(2)).sum::<f64>() / n).sqrt();
        let h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 * span } else { 0.01 * d0 / d1 };
        let h0 = h0.min(span);
        let y1: Vec<f64> = y0.iter().zip(f0).map(|(y, d)| y + h0 * d).collect();
        let mut f1 = vec![0.0; y0.len()];
        f(t0 + h0, &y1, &mut f1);
        stats.evaluations += 1;
        let d2 = (f1
            .iter()
            .zip(f0)
            .zip(&scale)
            .map(|((a, b), s)| ((a - b) / s).powi(2))
            .sum::<f64>()
            / n)
            .sqrt()
            / h0;
        let h1 = if d1.max(d2) <= 1e-15 {
            (h0 * 1e-3).max(1e-6 * span)
        } else {
            (0.01 / d1.max(d2)).powf(0.2)
        };
        (100.0 * h0).min(h1).min(span)
    }
}

fn stage(out: &mut [f64], y: &[f64], h: f64, k: &[Vec<f64>; 7], a: &[f64]) {
    for i in 0..out.len() {
        let mut acc = 0.0;
        for (j, aj) in a.iter().enumerate() {
            acc += aj * k[j][i];
        }
        out[i] = y[i] + h * acc;
    }
}
