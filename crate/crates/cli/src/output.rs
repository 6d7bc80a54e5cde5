//! CSV and JSON writers. Every file is written to a temporary sibling and
//! renamed into place.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::compare::Track;
use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io { path: path.to_path_buf(), source }
}

/// Writes `bytes` to `path` atomically.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    std::fs::create_dir_all(dir).map_err(io_err(dir))?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io_err(dir))?;
    tmp.write_all(bytes).map_err(io_err(path))?;
    tmp.as_file().sync_all().map_err(io_err(path))?;
    tmp.persist(path).map_err(|e| CliError::Io { path: path.to_path_buf(), source: e.error })?;
    Ok(())
}

pub fn track_csv(track: &Track) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let with_err = track.stderr.is_some();
    let header: &[&str] = if with_err { &["t_TR", "value", "stderr"] } else { &["t_TR", "value"] };
    w.write_record(header).expect("in-memory write");
    for i in 0..track.t_tr.len() {
        let mut row = vec![track.t_tr[i].to_string(), track.value[i].to_string()];
        if let Some(se) = &track.stderr {
            row.push(se[i].to_string());
        }
        w.write_record(&row).expect("in-memory write");
    }
    w.into_inner().expect("in-memory flush")
}

pub fn write_track(path: &Path, track: &Track, format: Format) -> Result<()> {
    match format {
        Format::Csv => write_atomic(path, &track_csv(track)),
        Format::Json => write_atomic(path, &serde_json::to_vec_pretty(track)?),
    }
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    write_atomic(path, &serde_json::to_vec_pretty(value)?)
}

/// Reads a track written by [`write_track`] in either format.
pub fn read_track(path: &Path) -> Result<Track> {
    let bytes = std::fs::read(path).map_err(io_err(path))?;
    if path.extension().is_some_and(|e| e == "json") {
        return Ok(serde_json::from_slice(&bytes)?);
    }
    let bad = |msg: String| CliError::Csv { path: path.to_path_buf(), msg };
    let mut r = csv::Reader::from_reader(bytes.as_slice());
    let headers = r.headers().map_err(|e| bad(e.to_string()))?.clone();
    let with_err = match headers.iter().collect::<Vec<_>>().as_slice() {
        ["t_TR", "value"] => false,
        ["t_TR", "value", "stderr"] => true,
        other => return Err(bad(format!("unexpected header {other:?}"))),
    };
    let mut track = Track { t_tr: Vec::new(), value: Vec::new(), stderr: with_err.then(Vec::new) };
    for (i, rec) in r.records().enumerate() {
        let rec = rec.map_err(|e| bad(e.to_string()))?;
        let num = |k: usize| -> Result<f64> {
            rec.get(k)
                .and_then(|s| s.trim().parse().ok())
                .ok_or_else(|| bad(format!("row {}: column {} is not a number", i + 2, k + 1)))
        };
        track.t_tr.push(num(0)?);
        track.value.push(num(1)?);
        if let Some(se) = track.stderr.as_mut() {
            se.push(num(2)?);
        }
    }
    Ok(track)
}

pub fn build_id() -> &'static str {
    env!("ZENO_BUILD_ID")
}

pub fn curve_path(dir: &Path, stem: &str, format: Format) -> PathBuf {
    dir.join(format!("{stem}.{}", format.extension()))
}
