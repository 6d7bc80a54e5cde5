//! Figure presets at the reference parameters.
//!
//! Every preset runs at `Ω = 935 s⁻¹`, `ω_L = 1.3·10¹⁰ s⁻¹`,
//! `ω_R = 9.7·10⁹ s⁻¹`, 40 levels per ladder and 5000 particles unless noted,
//! with seed [`DEFAULT_SEED`](crate::config::DEFAULT_SEED).

use std::fmt;
use std::str::FromStr;

use zeno_core::ModelParams;

use crate::config::{Engine, DEFAULT_PARTICLES};
use crate::curves::CurveKind;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PresetId {
    Fig2,
    Fig3,
    Fig4_5,
    Fig6,
    Fig7,
    Fig8,
    Fig9,
    Fig10,
    AppendixDesk,
    Equilibrium,
}

pub const ALL_PRESETS: &[PresetId] = &[
    PresetId::Fig2,
    PresetId::Fig3,
    PresetId::Fig4_5,
    PresetId::Fig6,
    PresetId::Fig7,
    PresetId::Fig8,
    PresetId::Fig9,
    PresetId::Fig10,
    PresetId::AppendixDesk,
    PresetId::Equilibrium,
];

impl PresetId {
    pub fn name(self) -> &'static str {
        match self {
            PresetId::Fig2 => "fig2",
            PresetId::Fig3 => "fig3",
            PresetId::Fig4_5 => "fig4-5",
            PresetId::Fig6 => "fig6",
            PresetId::Fig7 => "fig7",
            PresetId::Fig8 => "fig8",
            PresetId::Fig9 => "fig9",
            PresetId::Fig10 => "fig10",
            PresetId::AppendixDesk => "appendix-desk",
            PresetId::Equilibrium => "equilibrium",
        }
    }
}

impl fmt::Display for PresetId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PresetId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        ALL_PRESETS.iter().copied().find(|p| p.name() == s).ok_or_else(|| format!("unknown preset '{s}'"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Observable {
    PLeft,
    MuLeft,
    SigmaLeft,
}

impl Observable {
    pub fn name(self) -> &'static str {
        match self {
            Observable::PLeft => "p_left",
            Observable::MuLeft => "mu_left",
            Observable::SigmaLeft => "sigma_left",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurveSpec {
    /// File-name friendly identifier, unique within the preset.
    pub label: String,
    pub params: ModelParams,
    pub engine: Engine,
    pub particles: usize,
    pub t_max_tr: f64,
    pub samples: usize,
    pub observable: Observable,
}

impl CurveSpec {
    pub fn t_grid_tr(&self) -> Vec<f64> {
        zeno_core::series::uniform_grid(self.t_max_tr, self.samples)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Preset {
    pub id: PresetId,
    pub description: &'static str,
    pub curves: Vec<CurveSpec>,
}

impl Preset {
    pub fn base_params(&self) -> ModelParams {
        self.curves[0].params
    }
}

fn params(alpha_left: f64, alpha_right: f64, per_period: f64) -> ModelParams {
    let mut p = ModelParams { alpha_left, alpha_right, ..ModelParams::default() };
    p.set_collisions_per_period(per_period);
    p
}

struct Builder {
    curves: Vec<CurveSpec>,
    t_max_tr: f64,
    samples: usize,
}

impl Builder {
    fn new(t_max_tr: f64, samples: usize) -> Self {
        Self { curves: Vec::new(), t_max_tr, samples }
    }

    fn add(&mut self, label: String, params: ModelParams, engine: Engine, observable: Observable) -> &mut Self {
        self.curves.push(CurveSpec {
            label,
            params,
            engine,
            particles: DEFAULT_PARTICLES,
            t_max_tr: self.t_max_tr,
            samples: self.samples,
            observable,
        });
        self
    }
}

/// Desk-scale model for the full-versus-reduced check: 4+4 levels,
/// `T_R = 1 s`, 20 collisions per period with `α = 1.55` (`x ≈ 48`, Zeno regime),
/// gap/Ω and gap·τ above 100.
pub fn desk_params() -> ModelParams {
    ModelParams {
        n_left: 4,
        n_right: 4,
        omega_left: 2500.0,
        omega_right: 2500.0 * 9.7 / 13.0,
        rabi: 2.0 * std::f64::consts::PI,
        alpha_left: 1.55,
        alpha_right: 1.55,
        tau: 1.0 / 20.0,
    }
}

/// Collision rates per Rabi period of the one-sided sweeps.
pub const ONE_SIDED_RATES: [f64; 3] = [500.0, 1000.0, 1500.0];
/// Collision rates per Rabi period of the symmetric sweep.
pub const SWEEP_RATES: [f64; 5] = [300.0, 425.0, 550.0, 675.0, 800.0];
/// Symmetric scaling parameters of the coupling sweep at 800 collisions/T_R.
pub const COUPLING_SWEEP_X: [f64; 3] = [39.0, 50.0, 72.0];
/// Scaling parameters of the collapse bundles.
pub const COLLAPSE_X: [f64; 3] = [32.0, 48.0, 56.0];
/// Couplings realising each collapse bundle.
pub const COLLAPSE_ALPHA: [f64; 3] = [0.2, 0.25, 0.4];

pub fn preset(id: PresetId) -> Preset {
    use Observable::*;
    let mc = Engine::MonteCarlo;
    let (description, b) = match id {
        PresetId::Fig2 => {
            let mut b = Builder::new(3.0, 151);
            for rate in ONE_SIDED_RATES {
                let p = params(0.2, 0.0, rate);
                b.add(format!("rate{rate}_mc"), p, mc, PLeft);
                b.add(format!("rate{rate}_case-b"), p, Engine::Analytic(CurveKind::CaseB), PLeft);
            }
            ("P_L with coupling on the left ladder only, 500-1500 collisions per T_R", b)
        }
        PresetId::Fig3 => {
            let mut b = Builder::new(3.0, 151);
            for rate in ONE_SIDED_RATES {
                let p = params(0.0, 0.2, rate);
                b.add(format!("rate{rate}_mc"), p, mc, PLeft);
                b.add(format!("rate{rate}_case-c"), p, Engine::Analytic(CurveKind::CaseC), PLeft);
            }
            ("P_L with coupling on the right ladder only, 500-1500 collisions per T_R", b)
        }
        PresetId::Fig4_5 => {
            let mut b = Builder::new(2.5, 126);
            for x in COLLAPSE_X {
                let p = params(0.2, 0.2, x / 0.04);
                b.add(format!("x{x}_mc"), p, mc, PLeft);
                if x == 48.0 {
                    b.add(format!("x{x}_case-a-stretched"), p, Engine::Analytic(CurveKind::CaseAStretched), PLeft);
                    b.add(format!("x{x}_case-a"), p, Engine::Analytic(CurveKind::CaseA), PLeft);
                }
            }
            ("symmetric coupling: stretched-exponential comparison at x = 48 and curves for t/x^3 rescaling", b)
        }
        PresetId::Fig6 | PresetId::Fig7 => {
            let (obs, curve) = if id == PresetId::Fig6 { (MuLeft, CurveKind::Mu) } else { (SigmaLeft, CurveKind::Sigma) };
            let mut b = Builder::new(2.5, 126);
            for x in COLLAPSE_X {
                let p = params(0.2, 0.2, x / 0.04);
                b.add(format!("x{x}_mc"), p, mc, obs);
                b.add(format!("x{x}_{curve}"), p, Engine::Analytic(curve), obs);
            }
            let d = if id == PresetId::Fig6 { "mean level of the left ladder" } else { "level spread of the left ladder" };
            (d, b)
        }
        PresetId::Fig8 => {
            let mut b = Builder::new(2.0, 41);
            for rate in SWEEP_RATES {
                b.add(format!("rate{rate}_mc"), params(0.2, 0.2, rate), mc, PLeft);
            }
            ("P_L for alpha = 0.2 and 300-800 collisions per T_R", b)
        }
        PresetId::Fig9 => {
            let mut b = Builder::new(2.0, 41);
            for x in COUPLING_SWEEP_X {
                let a = (x / 800.0_f64).sqrt();
                b.add(format!("x{x}_mc"), params(a, a, 800.0), mc, PLeft);
            }
            ("P_L at 800 collisions per T_R for couplings giving x = 39, 50, 72", b)
        }
        PresetId::Fig10 => {
            let mut b = Builder::new(2.5, 101);
            for x in COLLAPSE_X {
                for a in COLLAPSE_ALPHA {
                    b.add(format!("x{x}_alpha{a}_mc"), params(a, a, x / (a * a)), mc, PLeft);
                }
            }
            ("scaling-law bundles: x = 32, 48, 56, each at alpha = 0.2, 0.25, 0.4", b)
        }
        PresetId::AppendixDesk => {
            let mut b = Builder::new(2.0, 8193);
            b.add("full".into(), desk_params(), Engine::FullMaster, PLeft);
            b.add("reduced".into(), desk_params(), Engine::ReducedMaster, PLeft);
            ("desk-scale full versus reduced master equation, 4+4 levels", b)
        }
        PresetId::Equilibrium => {
            let mut b = Builder::new(10.0, 201);
            b.add("symmetric_mc".into(), params(0.2, 0.2, 200.0), mc, PLeft);
            b.add("asymmetric_mc".into(), params(0.2, 0.1, 200.0), mc, PLeft);
            ("approach to the fixed point alpha_L/(alpha_L + alpha_R) at 200 collisions per T_R", b)
        }
    };
    Preset { id, description, curves: b.curves }
}
