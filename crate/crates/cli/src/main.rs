use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use zeno_cli::compare::{compare, Tolerance, Track};
use zeno_cli::config::{parse_config, Engine};
use zeno_cli::curves::{evaluate, CurveKind};
use zeno_cli::error::{CliError, Result};
use zeno_cli::output::{build_id, curve_path, read_track, write_json, write_track, Format};
use zeno_cli::preset::PresetId;
use zeno_cli::runner::{run_config, run_preset, RunOptions};
use zeno_core::analytic::ShiftReading;
use zeno_core::model::{build_level_scheme, validate_timescales, EnergyConvention, DEFAULT_SEPARATION};
use zeno_core::series::uniform_grid;

#[derive(Parser)]
#[command(name = "zeno", version = build_id(), about = "Collision-induced Zeno dynamics in a two-ladder molecule")]
struct Cli {
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    particles: Option<usize>,
    #[arg(long, global = true, default_value = ".")]
    out_dir: PathBuf,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Override the engine of simulated curves.
    #[arg(long, global = true)]
    engine: Option<Engine>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a named preset or a config file.
    Run { target: String },
    /// Compare two series files.
    Compare {
        a: PathBuf,
        b: PathBuf,
        /// e.g. `abs=1e-3,rel=0.1,z=3,window=0.2:3,resample,relax=0.5`
        #[arg(long, default_value = "")]
        tol: Tolerance,
        /// Write the report as JSON here.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Check a config and report its timescale separation.
    Validate { config: PathBuf },
    /// Evaluate an analytic curve for one or more scaling parameters.
    Curves {
        name: CurveKind,
        #[arg(long, value_delimiter = ',', required = true)]
        x: Vec<f64>,
        #[arg(long, default_value_t = 3.0)]
        t_max: f64,
        #[arg(long, default_value_t = 301)]
        samples: usize,
        #[arg(long, default_value = "printed")]
        shift: String,
    },
}

fn read_config(path: &Path) -> Result<zeno_cli::ExperimentConfig> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })?;
    Ok(parse_config(&text)?)
}

fn run(cli: Cli) -> Result<bool> {
    let opts = RunOptions { seed: cli.seed, particles: cli.particles, engine: cli.engine };
    std::fs::create_dir_all(&cli.out_dir).map_err(|source| CliError::Io { path: cli.out_dir.clone(), source })?;
    match cli.command {
        Command::Run { target } => {
            let summary = match target.parse::<PresetId>() {
                Ok(id) => run_preset(id, &opts, &cli.out_dir, cli.format)?,
                Err(_) if Path::new(&target).is_file() => {
                    run_config(&read_config(Path::new(&target))?, &opts, &cli.out_dir, cli.format)?
                }
                Err(_) => return Err(CliError::UnknownPreset(target)),
            };
            for f in &summary.files {
                println!("{}", f.display());
            }
            println!("{}", summary.manifest.display());
            Ok(true)
        }
        Command::Compare { a, b, tol, report } => {
            let (ta, tb) = (read_track(&a)?, read_track(&b)?);
            let rep = compare(&ta, &tb, &tol)?;
            println!("max |Δ| = {:.3e}", rep.max_abs_deviation);
            println!("max rel = {:.3e}", rep.max_rel_deviation);
            if let Some(z) = rep.max_z {
                println!("max z   = {z:.3}");
            }
            for c in &rep.checks {
                println!("{} {}: {:.4e} (limit {:.4e})", if c.passed { "PASS" } else { "FAIL" }, c.name, c.value, c.limit);
            }
            if let Some(path) = report {
                write_json(&path, &rep)?;
            }
            Ok(rep.passed)
        }
        Command::Validate { config } => {
            let cfg = read_config(&config)?;
            cfg.params.validate()?;
            let scheme = build_level_scheme(&cfg.params, EnergyConvention::ShiftedGround);
            let rep = validate_timescales(&cfg.params, &scheme, DEFAULT_SEPARATION);
            println!("engine            {}", cfg.engine);
            println!("levels            {} + {}", cfg.params.n_left, cfg.params.n_right);
            println!("collisions / T_R  {:.4}", cfg.params.collisions_per_period());
            println!("D_L T_R, D_R T_R  {:.4}, {:.4}", cfg.params.diffusion_left() * cfg.params.rabi_period(), cfg.params.diffusion_right() * cfg.params.rabi_period());
            println!("min gap           {:.4e} rad/s", rep.gap);
            println!("gap / Ω           {:.4e} {}", rep.rabi_ratio, if rep.rabi_ok { "ok" } else { "TOO SMALL" });
            println!("gap τ             {:.4e} {}", rep.collision_ratio, if rep.collision_ok { "ok" } else { "TOO SMALL" });
            Ok(rep.passed())
        }
        Command::Curves { name, x, t_max, samples, shift } => {
            let shift = match shift.as_str() {
                "printed" => ShiftReading::AsPrinted,
                "prefactor" => ShiftReading::MatchPrefactor,
                other => return Err(CliError::Compare(format!("unknown shift reading '{other}'"))),
            };
            let t = uniform_grid(t_max, samples);
            for xv in x {
                let track = Track::new(t.clone(), evaluate(name, xv, &t, shift)?);
                let path = curve_path(&cli.out_dir, &format!("{name}_x{xv}"), cli.format);
                write_track(&path, &track, cli.format)?;
                println!("{}", path.display());
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
