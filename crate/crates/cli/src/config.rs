//! `key = value` experiment configs.
//!
//! ```text
//! # Case B sweep point
//! alpha_left = 0.2
//! alpha_right = 0
//! tau_inv = 1000 /TR
//! engine = reduced-master
//! t_max = 3 TR
//! ```
//!
//! Times take a unit suffix `s` or `TR`; rates take `/s` or `/TR`. Bare
//! numbers are SI.

use std::collections::HashMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use zeno_core::analytic::ShiftReading;
use zeno_core::ModelParams;

use crate::curves::CurveKind;
use crate::error::{ConfigError, ConfigErrorKind};
use crate::preset::PresetId;

pub const DEFAULT_PARTICLES: usize = 5000;
pub const DEFAULT_SEED: u64 = 20_240_917;
pub const DEFAULT_T_MAX_TR: f64 = 2.0;
pub const DEFAULT_SAMPLES: usize = 101;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Engine {
    MonteCarlo,
    ReducedMaster,
    FullMaster,
    Analytic(CurveKind),
}

impl FromStr for Engine {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "monte-carlo" => Ok(Engine::MonteCarlo),
            "reduced-master" => Ok(Engine::ReducedMaster),
            "full-master" => Ok(Engine::FullMaster),
            _ => match s.strip_prefix("analytic:") {
                Some(curve) => curve.parse().map(Engine::Analytic),
                None => Err(format!(
                    "expected monte-carlo, reduced-master, full-master or analytic:<curve>, got '{s}'"
                )),
            },
        }
    }
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Engine::MonteCarlo => f.write_str("monte-carlo"),
            Engine::ReducedMaster => f.write_str("reduced-master"),
            Engine::FullMaster => f.write_str("full-master"),
            Engine::Analytic(c) => write!(f, "analytic:{c}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub params: ModelParams,
    pub engine: Engine,
    pub particles: usize,
    pub t_max_tr: f64,
    pub samples: usize,
    pub seed: u64,
    pub shift: ShiftReading,
    pub output: Option<PathBuf>,
    pub preset: Option<PresetId>,
}

impl ExperimentConfig {
    pub fn new(params: ModelParams, engine: Engine) -> Self {
        Self {
            params,
            engine,
            particles: DEFAULT_PARTICLES,
            t_max_tr: DEFAULT_T_MAX_TR,
            samples: DEFAULT_SAMPLES,
            seed: DEFAULT_SEED,
            shift: ShiftReading::default(),
            output: None,
            preset: None,
        }
    }

    /// Sample times in Rabi periods.
    pub fn t_grid_tr(&self) -> Vec<f64> {
        zeno_core::series::uniform_grid(self.t_max_tr, self.samples)
    }
}

const KEYS: &[&str] = &[
    "preset",
    "engine",
    "levels",
    "n_left",
    "n_right",
    "omega_left",
    "omega_right",
    "rabi",
    "alpha",
    "alpha_left",
    "alpha_right",
    "tau",
    "tau_inv",
    "particles",
    "t_max",
    "samples",
    "seed",
    "shift",
    "output",
];

struct Entry {
    line: usize,
    value: String,
}

enum Unit {
    Seconds,
    RabiPeriods,
}

/// Parses `"<num> <suffix>"` where suffix is one of `s`/`TR` (times) or
/// `/s`/`/TR` (rates). Returns the number and whether it is per/in `T_R`.
fn number_with_unit(value: &str, rate: bool) -> Result<(f64, Unit), String> {
    let v = value.trim();
    let (tr, si) = if rate { ("/TR", "/s") } else { ("TR", "s") };
    let (num, unit) = if let Some(n) = v.strip_suffix(tr) {
        (n, Unit::RabiPeriods)
    } else if let Some(n) = v.strip_suffix(si) {
        (n, Unit::Seconds)
    } else {
        (v, Unit::Seconds)
    };
    let x: f64 = num.trim().parse().map_err(|_| format!("'{value}' is not a number with optional {si}/{tr} suffix"))?;
    if !x.is_finite() {
        return Err(format!("'{value}' is not finite"));
    }
    Ok((x, unit))
}

pub fn parse_config(text: &str) -> Result<ExperimentConfig, ConfigError> {
    let mut entries: HashMap<&'static str, Entry> = HashMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let Some((key, value)) = content.split_once('=') else {
            return Err(ConfigError::new(Some(line), content, ConfigErrorKind::Malformed("expected key = value".into())));
        };
        let key = key.trim();
        let Some(&known) = KEYS.iter().find(|k| **k == key) else {
            return Err(ConfigError::new(Some(line), key, ConfigErrorKind::UnknownKey));
        };
        if entries.contains_key(known) {
            return Err(ConfigError::new(Some(line), key, ConfigErrorKind::Duplicate));
        }
        entries.insert(known, Entry { line, value: value.trim().to_owned() });
    }
    resolve(&entries)
}

fn resolve(entries: &HashMap<&'static str, Entry>) -> Result<ExperimentConfig, ConfigError> {
    let err = |key: &str, kind| ConfigError::new(entries.get(key).map(|e| e.line), key, kind);
    let malformed = |key: &str, msg: String| err(key, ConfigErrorKind::Malformed(msg));
    let nonphysical = |key: &str, msg: &str| err(key, ConfigErrorKind::NonPhysical(msg.to_owned()));

    let preset = match entries.get("preset") {
        Some(e) => Some(e.value.parse::<PresetId>().map_err(|m| malformed("preset", m))?),
        None => None,
    };
    let mut params = match preset {
        Some(id) => crate::preset::preset(id).base_params(),
        None => ModelParams::default(),
    };

    let get_f64 = |key: &str| -> Result<Option<f64>, ConfigError> {
        match entries.get(key) {
            None => Ok(None),
            Some(e) => {
                let v: f64 = e.value.parse().map_err(|_| malformed(key, format!("'{}' is not a number", e.value)))?;
                if !v.is_finite() {
                    return Err(malformed(key, "not finite".into()));
                }
                Ok(Some(v))
            }
        }
    };
    let get_usize = |key: &str| -> Result<Option<usize>, ConfigError> {
        match entries.get(key) {
            None => Ok(None),
            Some(e) => e.value.parse().map(Some).map_err(|_| malformed(key, format!("'{}' is not a count", e.value))),
        }
    };

    if let Some(n) = get_usize("levels")? {
        if entries.contains_key("n_left") || entries.contains_key("n_right") {
            return Err(err("levels", ConfigErrorKind::Conflict("n_left/n_right".into())));
        }
        params.n_left = n;
        params.n_right = n;
    }
    if let Some(n) = get_usize("n_left")? {
        params.n_left = n;
    }
    if let Some(n) = get_usize("n_right")? {
        params.n_right = n;
    }
    if params.n_left == 0 || params.n_right == 0 {
        let key = if entries.contains_key("levels") { "levels" } else if params.n_left == 0 { "n_left" } else { "n_right" };
        return Err(nonphysical(key, "a ladder needs at least one level"));
    }
    for key in ["omega_left", "omega_right"] {
        if let Some(v) = get_f64(key)? {
            if v < 0.0 {
                return Err(nonphysical(key, "rotational constant must be non-negative"));
            }
            if key == "omega_left" {
                params.omega_left = v;
            } else {
                params.omega_right = v;
            }
        }
    }
    // keep the collision rate per Rabi period when only Ω changes
    let rate = params.collisions_per_period();
    if let Some(v) = get_f64("rabi")? {
        if v <= 0.0 {
            return Err(nonphysical("rabi", "Rabi frequency must be positive"));
        }
        params.rabi = v;
        params.set_collisions_per_period(rate);
    }
    if let Some(a) = get_f64("alpha")? {
        if entries.contains_key("alpha_left") || entries.contains_key("alpha_right") {
            return Err(err("alpha", ConfigErrorKind::Conflict("alpha_left/alpha_right".into())));
        }
        params.alpha_left = a;
        params.alpha_right = a;
    }
    if let Some(a) = get_f64("alpha_left")? {
        params.alpha_left = a;
    }
    if let Some(a) = get_f64("alpha_right")? {
        params.alpha_right = a;
    }
    for (key, a) in [("alpha", params.alpha_left), ("alpha_left", params.alpha_left), ("alpha_right", params.alpha_right)] {
        if entries.contains_key(key) && a < 0.0 {
            return Err(nonphysical(key, "coupling must be non-negative"));
        }
    }

    let t_r = params.rabi_period();
    match (entries.get("tau"), entries.get("tau_inv")) {
        (Some(_), Some(_)) => return Err(err("tau_inv", ConfigErrorKind::Conflict("tau".into()))),
        (Some(e), None) => {
            let (v, unit) = number_with_unit(&e.value, false).map_err(|m| malformed("tau", m))?;
            if v <= 0.0 {
                return Err(nonphysical("tau", "mean collision interval must be positive"));
            }
            params.tau = match unit {
                Unit::Seconds => v,
                Unit::RabiPeriods => v * t_r,
            };
        }
        (None, Some(e)) => {
            let (v, unit) = number_with_unit(&e.value, true).map_err(|m| malformed("tau_inv", m))?;
            if v <= 0.0 {
                return Err(nonphysical("tau_inv", "collision frequency must be positive"));
            }
            params.tau = match unit {
                Unit::Seconds => 1.0 / v,
                Unit::RabiPeriods => t_r / v,
            };
        }
        (None, None) => {}
    }

    let engine = match entries.get("engine") {
        Some(e) => e.value.parse::<Engine>().map_err(|m| malformed("engine", m))?,
        None if preset.is_some() => Engine::MonteCarlo,
        None => return Err(ConfigError::new(None, "engine", ConfigErrorKind::MissingKey)),
    };
    let mut cfg = ExperimentConfig::new(params, engine);
    cfg.preset = preset;

    if let Some(n) = get_usize("particles")? {
        if n == 0 {
            return Err(nonphysical("particles", "need at least one particle"));
        }
        cfg.particles = n;
    }
    if let Some(e) = entries.get("t_max") {
        let (v, unit) = number_with_unit(&e.value, false).map_err(|m| malformed("t_max", m))?;
        if v <= 0.0 {
            return Err(nonphysical("t_max", "must be positive"));
        }
        cfg.t_max_tr = match unit {
            Unit::Seconds => v / t_r,
            Unit::RabiPeriods => v,
        };
    }
    if let Some(n) = get_usize("samples")? {
        if n < 2 {
            return Err(nonphysical("samples", "need at least two samples"));
        }
        cfg.samples = n;
    }
    if let Some(e) = entries.get("seed") {
        cfg.seed = e.value.parse().map_err(|_| malformed("seed", format!("'{}' is not an unsigned integer", e.value)))?;
    }
    if let Some(e) = entries.get("shift") {
        cfg.shift = match e.value.as_str() {
            "printed" => ShiftReading::AsPrinted,
            "prefactor" => ShiftReading::MatchPrefactor,
            other => return Err(malformed("shift", format!("expected printed or prefactor, got '{other}'"))),
        };
    }
    if let Some(e) = entries.get("output") {
        cfg.output = Some(PathBuf::from(&e.value));
    }
    cfg.params.validate().map_err(|e| ConfigError::new(None, "params", ConfigErrorKind::NonPhysical(e.to_string())))?;
    Ok(cfg)
}
