//! Second-order equation for `P_L` under the adiabatic ansatz.

use std::f64::consts::PI;

use super::cases::CaseSpec;
use super::diffusion::ground_population;
use crate::error::Result;
use crate::ode::Dopri5;

/// Integrates `P̈ + d̄ Ṗ + 8π²(P(f_L + f_R) − f_R) = 0` in Rabi periods,
/// with `f_s(t)` the ground population of ladder `s` at `D_s t` and `d̄` the
/// mean of the two rates. Starts from `P = 1`, `Ṗ = 0`. `rabi_scale`
/// multiplies `Ω`; pass `1` for the physical system.
pub fn pendulum_solve_rates(d_left: f64, d_right: f64, t: &[f64], rabi_scale: f64) -> Result<Vec<f64>> {
    let damping = 0.5 * (d_left + d_right);
    let k = 8.0 * PI * PI * rabi_scale * rabi_scale;
    let rhs = |s: f64, y: &[f64], dy: &mut [f64]| {
        let fl = ground_population(d_left * s);
        let fr = ground_population(d_right * s);
        dy[0] = y[1];
        dy[1] = -damping * y[1] - k * (y[0] * (fl + fr) - fr);
    };
    let mut out = Vec::with_capacity(t.len());
    Dopri5::with_tolerances(1e-10, 1e-12).integrate(rhs, 0.0, &[1.0, 0.0], t, |_, _, y| out.push(y[0]))?;
    Ok(out)
}

/// Pendulum solution for one of the three coupling cases.
pub fn pendulum_solve(spec: &CaseSpec) -> Result<Vec<f64>> {
    let (dl, dr) = spec.diffusion_rates();
    pendulum_solve_rates(dl, dr, &spec.t, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::cases::{case_a_pl, Case, CaseAForm};

    #[test]
    fn no_rabi_coupling_stays_put() {
        let t: Vec<f64> = (0..50).map(|i| i as f64 * 0.1).collect();
        let p = pendulum_solve_rates(10.0, 3.0, &t, 0.0).unwrap();
        assert!(p.iter().all(|v| (v - 1.0).abs() < 1e-14));
    }

    #[test]
    fn no_collisions_is_free_rabi() {
        let t: Vec<f64> = (0..40).map(|i| i as f64 * 0.05).collect();
        let p = pendulum_solve_rates(0.0, 0.0, &t, 1.0).unwrap();
        for (s, v) in t.iter().zip(&p) {
            assert!((v - (2.0 * PI * s).cos().powi(2)).abs() < 1e-8, "t={s}");
        }
    }

    #[test]
    fn symmetric_case_tracks_first_order_solution() {
        let x = 48.0;
        let t: Vec<f64> = (1..=30).map(|i| i as f64 * 0.1).collect();
        let spec = CaseSpec::new(Case::A, x, t.clone()).unwrap();
        let p = pendulum_solve(&spec).unwrap();
        for (s, v) in t.iter().zip(&p) {
            let a = case_a_pl(*s, x, CaseAForm::ExactAnsatz);
            assert!(((v - 0.5) - (a - 0.5)).abs() <= 3.0 / x * (a - 0.5) + 1e-6, "t={s}: {v} vs {a}");
        }
    }

    #[test]
    fn tends_to_coupling_ratio() {
        // α_L = 2α_R gives D_L = 4 D_R and P_L* = 2/3
        let t = vec![0.0, 20.0, 40.0];
        let p = pendulum_solve_rates(16.0, 4.0, &t, 1.0).unwrap();
        assert!((p[2] - 2.0 / 3.0).abs() < 0.02, "{}", p[2]);
    }
}
