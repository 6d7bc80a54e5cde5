//! Named analytic curve generators.

use std::fmt;
use std::str::FromStr;

use zeno_core::analytic::{self, Case, CaseAForm, CaseSpec, ShiftReading};
use zeno_core::model::{scaling_parameter, ScalingCase};
use zeno_core::ModelParams;

use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CurveKind {
    CaseA,
    CaseAStretched,
    CaseB,
    CaseBTail,
    CaseC,
    PendulumA,
    PendulumB,
    PendulumC,
    /// `μ_L` of the free left chain.
    Mu,
    /// `σ_L` of the free left chain.
    Sigma,
    /// `p_{1_L}` of the free left chain.
    Ground,
    ShortTime,
}

pub const ALL_CURVES: &[CurveKind] = &[
    CurveKind::CaseA,
    CurveKind::CaseAStretched,
    CurveKind::CaseB,
    CurveKind::CaseBTail,
    CurveKind::CaseC,
    CurveKind::PendulumA,
    CurveKind::PendulumB,
    CurveKind::PendulumC,
    CurveKind::Mu,
    CurveKind::Sigma,
    CurveKind::Ground,
    CurveKind::ShortTime,
];

impl CurveKind {
    pub fn name(self) -> &'static str {
        match self {
            CurveKind::CaseA => "case-a",
            CurveKind::CaseAStretched => "case-a-stretched",
            CurveKind::CaseB => "case-b",
            CurveKind::CaseBTail => "case-b-tail",
            CurveKind::CaseC => "case-c",
            CurveKind::PendulumA => "pendulum-a",
            CurveKind::PendulumB => "pendulum-b",
            CurveKind::PendulumC => "pendulum-c",
            CurveKind::Mu => "mu",
            CurveKind::Sigma => "sigma",
            CurveKind::Ground => "p1",
            CurveKind::ShortTime => "short-time",
        }
    }

    /// Which `x` a parameter set maps to for this curve.
    fn scaling(self) -> ScalingCase {
        match self {
            CurveKind::CaseB | CurveKind::CaseBTail | CurveKind::PendulumB => ScalingCase::LeftOnly,
            CurveKind::CaseC | CurveKind::PendulumC => ScalingCase::RightOnly,
            _ => ScalingCase::Symmetric,
        }
    }
}

impl fmt::Display for CurveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CurveKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        ALL_CURVES.iter().copied().find(|c| c.name() == s).ok_or_else(|| {
            let names: Vec<_> = ALL_CURVES.iter().map(|c| c.name()).collect();
            format!("unknown curve '{s}', expected one of {}", names.join(", "))
        })
    }
}

/// Evaluates `kind` at scaling parameter `x` on times in Rabi periods.
///
/// For the chain observables `x` is `D_L T_R`.
pub fn evaluate(kind: CurveKind, x: f64, t_tr: &[f64], shift: ShiftReading) -> Result<Vec<f64>> {
    let each = |f: &dyn Fn(f64) -> f64| t_tr.iter().map(|&t| f(t)).collect::<Vec<_>>();
    Ok(match kind {
        CurveKind::CaseA => each(&|t| analytic::case_a_pl(t, x, CaseAForm::ExactAnsatz)),
        CurveKind::CaseAStretched => each(&|t| analytic::case_a_pl(t, x, CaseAForm::Stretched)),
        CurveKind::CaseB => each(&|t| analytic::case_b_pl(t, x, shift)),
        CurveKind::CaseBTail => each(&|t| analytic::case_b_tail(t, x)),
        CurveKind::CaseC => each(&|t| analytic::case_c_pl(t, x, shift)),
        CurveKind::PendulumA | CurveKind::PendulumB | CurveKind::PendulumC => {
            let case = match kind {
                CurveKind::PendulumA => Case::A,
                CurveKind::PendulumB => Case::B,
                _ => Case::C,
            };
            analytic::pendulum_solve(&CaseSpec::new(case, x, t_tr.to_vec())?)?
        }
        CurveKind::Mu => each(&|t| analytic::moments(x * t).0),
        CurveKind::Sigma => each(&|t| analytic::moments(x * t).1.sqrt()),
        CurveKind::Ground => each(&|t| analytic::ground_population(x * t)),
        CurveKind::ShortTime => each(&|t| analytic::short_time_pl(2.0 * std::f64::consts::PI * t, 1.0)),
    })
}

/// Evaluates `kind` for a concrete parameter set.
pub fn evaluate_for_params(kind: CurveKind, params: &ModelParams, t_tr: &[f64], shift: ShiftReading) -> Result<Vec<f64>> {
    match kind {
        CurveKind::PendulumA | CurveKind::PendulumB | CurveKind::PendulumC => {
            let t_r = params.rabi_period();
            Ok(analytic::pendulum_solve_rates(params.diffusion_left() * t_r, params.diffusion_right() * t_r, t_tr, 1.0)?)
        }
        CurveKind::Mu | CurveKind::Sigma | CurveKind::Ground => {
            evaluate(kind, params.diffusion_left() * params.rabi_period(), t_tr, shift)
        }
        _ => evaluate(kind, scaling_parameter(params, kind.scaling()), t_tr, shift),
    }
}
