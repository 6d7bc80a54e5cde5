//! Executes configs and presets.

use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;
use zeno_core::analytic::ShiftReading;
use zeno_core::lindblad::{
    dominant_frequency, integrate_full, integrate_reduced, DensityMatrix, FullOptions, FullRun, GeneratorMode,
    GeneratorSpec, ReducedState,
};
use zeno_core::model::{build_level_scheme, min_offresonant_gap, EnergyConvention};
use zeno_core::trajectory::{run_ensemble, EnsembleSpec};
use zeno_core::{ModelParams, SeriesResult};

use crate::compare::Track;
use crate::config::{Engine, ExperimentConfig, DEFAULT_SEED};
use crate::curves::evaluate_for_params;
use crate::error::Result;
use crate::output::{build_id, curve_path, write_json, write_track, Format};
use crate::preset::{desk_params, preset, CurveSpec, Observable, PresetId};

/// Command-line overrides applied on top of presets and configs.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunOptions {
    pub seed: Option<u64>,
    pub particles: Option<usize>,
    pub engine: Option<Engine>,
}

/// Output of one engine run.
#[derive(Debug, Clone, PartialEq)]
pub enum CurveResult {
    Series(SeriesResult),
    Analytic(Track),
}

impl CurveResult {
    pub fn track(&self, observable: Observable) -> Track {
        match self {
            CurveResult::Analytic(t) => t.clone(),
            CurveResult::Series(s) => match observable {
                Observable::PLeft => Track::p_left(s),
                Observable::MuLeft => Track::new(s.t_rabi(), s.mu_left.clone()),
                Observable::SigmaLeft => Track::new(s.t_rabi(), s.sigma_left.clone()),
            },
        }
    }
}

/// Runs one engine on a grid given in Rabi periods.
pub fn simulate(
    params: &ModelParams,
    engine: Engine,
    particles: usize,
    t_tr: &[f64],
    seed: u64,
    shift: ShiftReading,
) -> Result<CurveResult> {
    let t_r = params.rabi_period();
    let t: Vec<f64> = t_tr.iter().map(|x| x * t_r).collect();
    Ok(match engine {
        Engine::MonteCarlo => {
            let spec = EnsembleSpec { params: *params, particles, t_grid: t, seed };
            CurveResult::Series(run_ensemble(&spec)?)
        }
        Engine::ReducedMaster => {
            let spec = GeneratorSpec::new(GeneratorMode::Reduced, *params)?;
            let s0 = ReducedState::ground_left(params.n_left, params.n_right);
            CurveResult::Series(integrate_reduced(&s0, &spec, &t)?)
        }
        Engine::FullMaster => {
            let run = full_run(params, &t, &FullOptions::default())?;
            CurveResult::Series(run.series)
        }
        Engine::Analytic(kind) => {
            CurveResult::Analytic(Track::new(t_tr.to_vec(), evaluate_for_params(kind, params, t_tr, shift)?))
        }
    })
}

fn full_run(params: &ModelParams, t: &[f64], opts: &FullOptions) -> Result<FullRun> {
    let spec = GeneratorSpec::new(GeneratorMode::Full, *params)?;
    Ok(integrate_full(&DensityMatrix::pure_basis(params.dim(), 0), &spec, t, opts)?)
}

/// Full-versus-reduced comparison at desk scale.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeskReport {
    pub samples: usize,
    pub max_population_deviation: f64,
    pub max_trace_error: f64,
    pub max_hermiticity_error: f64,
    pub min_eigenvalue: f64,
    /// Separation ratios `ΔE/Ω` and `ΔE τ`.
    pub gap_over_rabi: f64,
    pub gap_times_tau: f64,
    /// Dominant angular frequency of `ρ_{1_L 2_L}` above the cutoff [rad/s].
    pub peak_omega: f64,
    /// `(E_{2_L} − E_{1_L})/ħ` [rad/s].
    pub expected_omega: f64,
    pub resolution: f64,
    pub full_steps: usize,
}

impl DeskReport {
    pub fn peak_matches(&self) -> bool {
        (self.peak_omega - self.expected_omega).abs() <= self.resolution
    }
}

/// Integrates both master equations over `t_max_tr` Rabi periods with
/// `fft_len + 1` samples and compares them.
pub fn desk_comparison(params: &ModelParams, t_max_tr: f64, fft_len: usize) -> Result<DeskReport> {
    let t_r = params.rabi_period();
    let t: Vec<f64> = (0..=fft_len).map(|i| t_max_tr * t_r * i as f64 / fft_len as f64).collect();
    let opts = FullOptions { record: vec![(0, 1)], positivity_stride: 16, ..FullOptions::default() };
    let full = full_run(params, &t, &opts)?;
    let reduced_spec = GeneratorSpec::new(GeneratorMode::Reduced, *params)?;
    let reduced = integrate_reduced(&ReducedState::ground_left(params.n_left, params.n_right), &reduced_spec, &t)?;

    let mut dev = 0.0_f64;
    for (a, b) in full.series.populations.as_ref().unwrap().iter().zip(reduced.populations.as_ref().unwrap()) {
        for (x, y) in a.iter().zip(b) {
            dev = dev.max((x - y).abs());
        }
    }

    let scheme = build_level_scheme(params, EnergyConvention::ShiftedGround);
    let gap = min_offresonant_gap(&scheme);
    let dt = t[1] - t[0];
    let peak = dominant_frequency(&full.elements[0][..fft_len], dt, gap / 10.0)?;
    Ok(DeskReport {
        samples: t.len(),
        max_population_deviation: dev,
        max_trace_error: full.max_trace_error,
        max_hermiticity_error: full.max_hermiticity_error,
        min_eigenvalue: full.min_eigenvalue,
        gap_over_rabi: gap / params.rabi,
        gap_times_tau: gap * params.tau,
        peak_omega: peak.omega,
        expected_omega: scheme.energies_left[1] - scheme.energies_left[0],
        resolution: peak.resolution,
        full_steps: full.stats.accepted + full.stats.rejected,
    })
}

#[derive(Debug, Clone, Serialize)]
struct CurveManifest {
    label: String,
    engine: String,
    observable: &'static str,
    particles: Option<usize>,
    t_max_tr: f64,
    samples: usize,
    params: ModelParams,
    file: String,
}

#[derive(Debug, Clone, Serialize)]
struct Manifest {
    preset: Option<String>,
    description: Option<&'static str>,
    build_id: &'static str,
    seed: u64,
    wall_time_s: f64,
    curves: Vec<CurveManifest>,
    #[serde(skip_serializing_if = "Option::is_none")]
    desk: Option<DeskReport>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub files: Vec<PathBuf>,
    pub manifest: PathBuf,
}

fn effective(curve: &CurveSpec, opts: &RunOptions) -> CurveSpec {
    let mut c = curve.clone();
    if let Some(n) = opts.particles {
        c.particles = n;
    }
    if let Some(e) = opts.engine {
        if !matches!(c.engine, Engine::Analytic(_)) {
            c.engine = e;
        }
    }
    c
}

fn run_curves(
    curves: &[CurveSpec],
    seed: u64,
    shift: ShiftReading,
    out_dir: &Path,
    format: Format,
) -> Result<(Vec<PathBuf>, Vec<CurveManifest>)> {
    let mut files = Vec::new();
    let mut manifests = Vec::new();
    for c in curves {
        let result = simulate(&c.params, c.engine, c.particles, &c.t_grid_tr(), seed, shift)?;
        let stem = format!("{}_{}", c.label, c.observable.name());
        let path = curve_path(out_dir, &stem, format);
        write_track(&path, &result.track(c.observable), format)?;
        manifests.push(CurveManifest {
            label: c.label.clone(),
            engine: c.engine.to_string(),
            observable: c.observable.name(),
            particles: (c.engine == Engine::MonteCarlo).then_some(c.particles),
            t_max_tr: c.t_max_tr,
            samples: c.samples,
            params: c.params,
            file: path.file_name().unwrap().to_string_lossy().into_owned(),
        });
        files.push(path);
    }
    Ok((files, manifests))
}

pub fn run_preset(id: PresetId, opts: &RunOptions, out_dir: &Path, format: Format) -> Result<RunSummary> {
    let start = Instant::now();
    let p = preset(id);
    let seed = opts.seed.unwrap_or(DEFAULT_SEED);
    let curves: Vec<CurveSpec> = p.curves.iter().map(|c| effective(c, opts)).collect();
    let (files, manifests) = run_curves(&curves, seed, ShiftReading::default(), out_dir, format)?;
    let desk = if id == PresetId::AppendixDesk {
        Some(desk_comparison(&desk_params(), 2.0, 8192)?)
    } else {
        None
    };
    let manifest = Manifest {
        preset: Some(id.to_string()),
        description: Some(p.description),
        build_id: build_id(),
        seed,
        wall_time_s: start.elapsed().as_secs_f64(),
        curves: manifests,
        desk,
    };
    let manifest_path = out_dir.join(format!("{id}_manifest.json"));
    write_json(&manifest_path, &manifest)?;
    Ok(RunSummary { files, manifest: manifest_path })
}

/// Runs a parsed config; a `preset` key delegates to [`run_preset`].
pub fn run_config(cfg: &ExperimentConfig, opts: &RunOptions, out_dir: &Path, format: Format) -> Result<RunSummary> {
    let mut opts = opts.clone();
    opts.seed = opts.seed.or(Some(cfg.seed));
    if let Some(id) = cfg.preset {
        opts.particles = opts.particles.or(Some(cfg.particles));
        return run_preset(id, &opts, out_dir, format);
    }
    let start = Instant::now();
    let seed = opts.seed.unwrap_or(DEFAULT_SEED);
    let stem = cfg
        .output
        .as_ref()
        .and_then(|p| p.file_stem())
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "run".to_owned());
    let dir = match cfg.output.as_ref().and_then(|p| p.parent()).filter(|p| !p.as_os_str().is_empty()) {
        Some(parent) => out_dir.join(parent),
        None => out_dir.to_path_buf(),
    };
    let curve = effective(
        &CurveSpec {
            label: stem.clone(),
            params: cfg.params,
            engine: cfg.engine,
            particles: cfg.particles,
            t_max_tr: cfg.t_max_tr,
            samples: cfg.samples,
            observable: Observable::PLeft,
        },
        &opts,
    );
    let (files, manifests) = run_curves(&[curve], seed, cfg.shift, &dir, format)?;
    let manifest = Manifest {
        preset: None,
        description: None,
        build_id: build_id(),
        seed,
        wall_time_s: start.elapsed().as_secs_f64(),
        curves: manifests,
        desk: None,
    };
    let manifest_path = dir.join(format!("{stem}_manifest.json"));
    write_json(&manifest_path, &manifest)?;
    Ok(RunSummary { files, manifest: manifest_path })
}
