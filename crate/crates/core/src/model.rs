//! Level scheme and Hamiltonian family of the two-ladder molecule.
//!
//! Two ladders of rotational levels, left (`L`) and right (`R`), share a
//! degenerate ground pair `(1_L, 1_R)` coupled by a Rabi term of strength
//! `Ω`. Collisions couple nearest neighbours inside each ladder only.
//!
//! All energies are stored as angular frequencies `E/ħ` in rad/s. Level
//! indices are zero-based in code: `energies_left[0]` is `1_L`.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Result, ZenoError};

/// Rotational constant of the left ladder used in the reference experiments [rad/s].
pub const OMEGA_LEFT_REF: f64 = 1.3e10;
/// Rotational constant of the right ladder used in the reference experiments [rad/s].
pub const OMEGA_RIGHT_REF: f64 = 9.7e9;
/// Rabi frequency used in the reference experiments [rad/s].
pub const RABI_REF: f64 = 935.0;
/// Default ladder size.
pub const LEVELS_REF: usize = 40;

/// Physical constants of one experiment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub n_left: usize,
    pub n_right: usize,
    /// Rotational constant `ω_L` [rad/s].
    pub omega_left: f64,
    /// Rotational constant `ω_R` [rad/s].
    pub omega_right: f64,
    /// Rabi frequency `Ω` [rad/s].
    pub rabi: f64,
    pub alpha_left: f64,
    pub alpha_right: f64,
    /// Mean interval between collisions `τ` [s].
    pub tau: f64,
}

impl Default for ModelParams {
    /// 40+40 levels, reference frequencies, `α = 0.2` on both ladders and
    /// 800 collisions per Rabi period.
    fn default() -> Self {
        let mut params = Self {
            n_left: LEVELS_REF,
            n_right: LEVELS_REF,
            omega_left: OMEGA_LEFT_REF,
            omega_right: OMEGA_RIGHT_REF,
            rabi: RABI_REF,
            alpha_left: 0.2,
            alpha_right: 0.2,
            tau: 1.0,
        };
        params.set_collisions_per_period(800.0);
        params
    }
}

impl ModelParams {
    pub fn validate(&self) -> Result<()> {
        fn bad(field: &'static str, reason: &str) -> ZenoError {
            ZenoError::InvalidParameter { field, reason: reason.to_owned() }
        }
        if self.n_left == 0 {
            return Err(bad("n_left", "must be at least 1"));
        }
        if self.n_right == 0 {
            return Err(bad("n_right", "must be at least 1"));
        }
        if !(self.tau > 0.0 && self.tau.is_finite()) {
            return Err(bad("tau", "must be positive and finite"));
        }
        if !(self.rabi > 0.0 && self.rabi.is_finite()) {
            return Err(bad("rabi", "must be positive and finite"));
        }
        if !(self.alpha_left >= 0.0 && self.alpha_left.is_finite()) {
            return Err(bad("alpha_left", "must be non-negative and finite"));
        }
        if !(self.alpha_right >= 0.0 && self.alpha_right.is_finite()) {
            return Err(bad("alpha_right", "must be non-negative and finite"));
        }
        if !(self.omega_left.is_finite() && self.omega_right.is_finite()) {
            return Err(bad("omega", "rotational constants must be finite"));
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.n_left + self.n_right
    }

    /// `T_R = 2π/Ω` [s].
    pub fn rabi_period(&self) -> f64 {
        2.0 * PI / self.rabi
    }

    /// Sets `τ` so that `rate` collisions happen per Rabi period on average.
    pub fn set_collisions_per_period(&mut self, rate: f64) {
        self.tau = self.rabi_period() / rate;
    }

    pub fn collisions_per_period(&self) -> f64 {
        self.rabi_period() / self.tau
    }

    /// `D_L = α_L²/τ` [1/s].
    pub fn diffusion_left(&self) -> f64 {
        self.alpha_left * self.alpha_left / self.tau
    }

    /// `D_R = α_R²/τ` [1/s].
    pub fn diffusion_right(&self) -> f64 {
        self.alpha_right * self.alpha_right / self.tau
    }

    /// Mean diffusion rate `D = (D_L + D_R)/2`.
    pub fn diffusion_mean(&self) -> f64 {
        0.5 * (self.diffusion_left() + self.diffusion_right())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum EnergyConvention {
    /// `E_n/ħ = ω(n(n+1) − 2)`: both ground levels sit at zero.
    #[default]
    ShiftedGround,
    /// `E_n/ħ = ω n(n+1)` as in the bare rotor.
    RawRotational,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LevelScheme {
    pub energies_left: Vec<f64>,
    pub energies_right: Vec<f64>,
    pub convention: EnergyConvention,
}

impl LevelScheme {
    pub fn is_ground_degenerate(&self) -> bool {
        self.energies_left[0] == self.energies_right[0]
    }

    /// Energies in state order `1_L..N_L, 1_R..N_R`.
    pub fn energies(&self) -> Vec<f64> {
        self.energies_left
            .iter()
            .chain(self.energies_right.iter())
            .copied()
            .collect()
    }

    pub fn max_abs_energy(&self) -> f64 {
        self.energies_left
            .iter()
            .chain(&self.energies_right)
            .fold(0.0_f64, |m, e| m.max(e.abs()))
    }
}

/// Rotational energy `E_n/ħ` of level `n` (one-based) of a ladder.
pub fn rotational_energy(omega: f64, n: usize, convention: EnergyConvention) -> f64 {
    let n = n as f64;
    match convention {
        EnergyConvention::ShiftedGround => omega * (n * (n + 1.0) - 2.0),
        EnergyConvention::RawRotational => omega * n * (n + 1.0),
    }
}

pub fn build_level_scheme(params: &ModelParams, convention: EnergyConvention) -> LevelScheme {
    let ladder = |omega: f64, n: usize| -> Vec<f64> {
        (1..=n).map(|k| rotational_energy(omega, k, convention)).collect()
    };
    LevelScheme {
        energies_left: ladder(params.omega_left, params.n_left),
        energies_right: ladder(params.omega_right, params.n_right),
        convention,
    }
}

/// Smallest `|E_{m_L} − E_{n_R}|/ħ` over excited pairs `m_L, n_R > 1`.
///
/// Returns `+∞` when either ladder has no excited level and `0` when an
/// excited pair is degenerate.
pub fn min_offresonant_gap(scheme: &LevelScheme) -> f64 {
    let mut gap = f64::INFINITY;
    for &el in scheme.energies_left.iter().skip(1) {
        for &er in scheme.energies_right.iter().skip(1) {
            gap = gap.min((el - er).abs());
        }
    }
    gap
}

/// Separation of the slow rates (`Ω`, `1/τ`) from the smallest excited gap.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TimescaleReport {
    pub gap: f64,
    /// `ΔE/(ħΩ)`.
    pub rabi_ratio: f64,
    /// `ΔE τ/ħ`.
    pub collision_ratio: f64,
    pub threshold: f64,
    pub rabi_ok: bool,
    pub collision_ok: bool,
}

impl TimescaleReport {
    pub fn passed(&self) -> bool {
        self.rabi_ok && self.collision_ok
    }
}

pub const DEFAULT_SEPARATION: f64 = 100.0;

pub fn validate_timescales(params: &ModelParams, scheme: &LevelScheme, threshold: f64) -> TimescaleReport {
    let gap = min_offresonant_gap(scheme);
    let ratio = |rate: f64| if rate == 0.0 { f64::INFINITY } else { gap / rate };
    let rabi_ratio = ratio(params.rabi);
    let collision_ratio = ratio(1.0 / params.tau);
    TimescaleReport {
        gap,
        rabi_ratio,
        collision_ratio,
        threshold,
        rabi_ok: rabi_ratio >= threshold,
        collision_ok: collision_ratio >= threshold,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ScalingCase {
    Symmetric,
    LeftOnly,
    RightOnly,
}

/// Dimensionless ratio of Rabi period to diffusion time.
///
/// Symmetric: `x = ᾱ² T_R/τ`, `ᾱ² = (α_L² + α_R²)/2`. Single-ladder cases
/// carry an extra factor 1/2: `x = α_s² T_R/(2τ)`.
pub fn scaling_parameter(params: &ModelParams, case: ScalingCase) -> f64 {
    let tr_over_tau = params.rabi_period() / params.tau;
    match case {
        ScalingCase::Symmetric => {
            0.5 * (params.alpha_left.powi(2) + params.alpha_right.powi(2)) * tr_over_tau
        }
        ScalingCase::LeftOnly => 0.5 * params.alpha_left.powi(2) * tr_over_tau,
        ScalingCase::RightOnly => 0.5 * params.alpha_right.powi(2) * tr_over_tau,
    }
}

/// Time for diffusion to reach the top of an `n`-level ladder, in Rabi periods.
///
/// Rough estimate `N²/x`, refined `N²/(π² x)`. Infinite for `x = 0`.
pub fn dissociation_time(n_levels: usize, x: f64, refined: bool) -> f64 {
    if x == 0.0 {
        return f64::INFINITY;
    }
    let n2 = (n_levels * n_levels) as f64;
    if refined {
        n2 / (PI * PI * x)
    } else {
        n2 / x
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ladder {
    Left,
    Right,
}

/// Dissociation time of one ladder with `x_s = α_s² T_R/τ`, in Rabi periods.
pub fn ladder_dissociation_time(params: &ModelParams, ladder: Ladder, refined: bool) -> f64 {
    let (n, alpha) = match ladder {
        Ladder::Left => (params.n_left, params.alpha_left),
        Ladder::Right => (params.n_right, params.alpha_right),
    };
    dissociation_time(n, alpha * alpha * params.rabi_period() / params.tau, refined)
}

/// Path-graph adjacency: zero diagonal, unit first off-diagonals.
pub fn ladder_coupling(n: usize) -> DMatrix<f64> {
    DMatrix::from_fn(n, n, |i, j| if i.abs_diff(j) == 1 { 1.0 } else { 0.0 })
}

/// Static operators of the model, in units of ħ.
#[derive(Debug, Clone)]
pub struct OperatorSet {
    pub h0_diagonal: Vec<f64>,
    /// Rabi strength and the coupled pair `(1_L, 1_R)` as state indices.
    pub rabi_coupling: (f64, (usize, usize)),
    pub v_left: DMatrix<f64>,
    pub v_right: DMatrix<f64>,
}

impl OperatorSet {
    pub fn new(params: &ModelParams, scheme: &LevelScheme) -> Self {
        Self {
            h0_diagonal: scheme.energies(),
            rabi_coupling: (params.rabi, (0, params.n_left)),
            v_left: ladder_coupling(params.n_left),
            v_right: ladder_coupling(params.n_right),
        }
    }

    /// `H₁/ħ` as a dense matrix on the full space.
    pub fn h1(&self) -> DMatrix<f64> {
        let dim = self.h0_diagonal.len();
        let (rabi, (a, b)) = self.rabi_coupling;
        let mut h = DMatrix::zeros(dim, dim);
        h[(a, b)] = rabi;
        h[(b, a)] = rabi;
        h
    }

    /// `V = α_L V_L ⊕ α_R V_R` on the full space.
    pub fn collision_operator(&self, alpha_left: f64, alpha_right: f64) -> DMatrix<f64> {
        let nl = self.v_left.nrows();
        let nr = self.v_right.nrows();
        let mut v = DMatrix::zeros(nl + nr, nl + nr);
        v.view_mut((0, 0), (nl, nl)).copy_from(&(&self.v_left * alpha_left));
        v.view_mut((nl, nl), (nr, nr)).copy_from(&(&self.v_right * alpha_right));
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reference() -> ModelParams {
        ModelParams::default()
    }

    #[test]
    fn shifted_ground_energies() {
        let p = reference();
        let s = build_level_scheme(&p, EnergyConvention::ShiftedGround);
        assert_eq!(s.energies_left[0], 0.0);
        assert_eq!(s.energies_right[0], 0.0);
        assert!((s.energies_left[1] - 5.2e10).abs() < 1.0);
        assert!(s.is_ground_degenerate());
        assert!(s.energies_left.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn raw_energies_split_the_ground_pair() {
        let p = reference();
        let s = build_level_scheme(&p, EnergyConvention::RawRotational);
        assert!((s.energies_right[2] - 1.164e11).abs() < 1.0);
        let split = s.energies_left[0] - s.energies_right[0];
        assert!((split - 2.0 * (p.omega_left - p.omega_right)).abs() < 1e-3);
        assert!(!s.is_ground_degenerate());
    }

    #[test]
    fn gap_edge_cases() {
        let mut p = reference();
        p.n_left = 1;
        p.n_right = 1;
        let s = build_level_scheme(&p, EnergyConvention::ShiftedGround);
        assert_eq!(min_offresonant_gap(&s), f64::INFINITY);

        let mut p = reference();
        p.omega_right = p.omega_left;
        let s = build_level_scheme(&p, EnergyConvention::ShiftedGround);
        assert_eq!(min_offresonant_gap(&s), 0.0);
    }

    #[test]
    fn gap_scan_ignores_ground_shift() {
        let p = reference();
        let mut s = build_level_scheme(&p, EnergyConvention::ShiftedGround);
        let before = min_offresonant_gap(&s);
        s.energies_left[0] += 7.0e9;
        s.energies_right[0] -= 3.0e9;
        assert_eq!(min_offresonant_gap(&s), before);
    }

    #[test]
    fn timescale_checks() {
        let mut p = reference();
        p.tau = 1.0 / 2.0e5;
        let s = build_level_scheme(&p, EnergyConvention::RawRotational);
        let r = validate_timescales(&p, &s, DEFAULT_SEPARATION);
        assert!(r.passed());
        assert!((r.rabi_ratio - 2.8e9 / 935.0).abs() / r.rabi_ratio < 1e-9);
        assert!((r.collision_ratio - 1.4e4).abs() < 1.0);

        // gap only ten times the Rabi frequency
        let mut q = p;
        q.rabi = r.gap / 10.0;
        let r = validate_timescales(&q, &s, DEFAULT_SEPARATION);
        assert!(!r.rabi_ok);
        assert!(!r.passed());
    }

    #[test]
    fn scaling_parameter_cases() {
        let mut p = reference();
        p.set_collisions_per_period(800.0);
        assert!((scaling_parameter(&p, ScalingCase::Symmetric) - 32.0).abs() < 1e-9);

        p.alpha_right = 0.0;
        p.set_collisions_per_period(500.0);
        assert!((scaling_parameter(&p, ScalingCase::LeftOnly) - 10.0).abs() < 1e-9);

        p.alpha_left = 0.0;
        for case in [ScalingCase::Symmetric, ScalingCase::LeftOnly, ScalingCase::RightOnly] {
            assert_eq!(scaling_parameter(&p, case), 0.0);
        }
    }

    #[test]
    fn symmetric_scaling_matches_closed_form() {
        let mut p = reference();
        p.alpha_left = 0.3;
        p.alpha_right = 0.3;
        p.tau = 3.7e-6;
        let expected = 2.0 * PI * 0.09 / (p.rabi * p.tau);
        assert!((scaling_parameter(&p, ScalingCase::Symmetric) - expected).abs() < 1e-9 * expected);
    }

    #[test]
    fn dissociation_times() {
        assert!((dissociation_time(40, 32.0, false) - 50.0).abs() < 1e-12);
        assert!((dissociation_time(40, 56.0, true) - 1600.0 / (PI * PI * 56.0)).abs() < 1e-12);
        assert!((dissociation_time(1, 4.0, false) - 0.25).abs() < 1e-12);
        assert_eq!(dissociation_time(40, 0.0, true), f64::INFINITY);
    }

    #[test]
    fn ladder_coupling_shape() {
        for n in 1..7 {
            let v = ladder_coupling(n);
            assert_eq!(v, v.transpose());
            let v2 = &v * &v;
            for i in 0..n {
                assert_eq!(v[(i, i)], 0.0);
                let expected = if n == 1 {
                    0.0
                } else if i == 0 || i == n - 1 {
                    1.0
                } else {
                    2.0
                };
                assert_eq!(v2[(i, i)], expected);
                for j in 0..n {
                    if i.abs_diff(j) > 1 {
                        assert_eq!(v[(i, j)], 0.0);
                    }
                }
            }
        }
    }

    #[test]
    fn h1_has_two_entries() {
        let p = reference();
        let s = build_level_scheme(&p, EnergyConvention::ShiftedGround);
        let ops = OperatorSet::new(&p, &s);
        let h1 = ops.h1();
        assert_eq!(h1.iter().filter(|x| **x != 0.0).count(), 2);
        assert_eq!(h1[(0, 40)], p.rabi);
        let v = ops.collision_operator(0.2, 0.1);
        assert_eq!(v[(39, 40)], 0.0);
        assert_eq!(v[(40, 41)], 0.1);
    }

    #[test]
    fn validation_rejects_nonphysical() {
        let mut p = reference();
        p.tau = -1.0;
        assert!(p.validate().is_err());
        let mut p = reference();
        p.n_right = 0;
        assert!(p.validate().is_err());
        let mut p = reference();
        p.alpha_left = -0.1;
        assert!(p.validate().is_err());
        assert!(reference().validate().is_ok());
    }
}
