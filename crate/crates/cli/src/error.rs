use std::path::PathBuf;

use thiserror::Error;
use zeno_core::ZenoError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Model(#[from] ZenoError),
    #[error("unknown preset '{0}'")]
    UnknownPreset(String),
    #[error("comparison: {0}")]
    Compare(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {msg}")]
    Csv { path: PathBuf, msg: String },
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, CliError>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigErrorKind {
    #[error("unknown key")]
    UnknownKey,
    #[error("missing required key")]
    MissingKey,
    #[error("duplicate key")]
    Duplicate,
    #[error("non-physical value: {0}")]
    NonPhysical(String),
    #[error("malformed value: {0}")]
    Malformed(String),
    #[error("conflicts with '{0}'")]
    Conflict(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{}'{field}': {kind}", line.map(|l| format!("line {l}: ")).unwrap_or_default())]
pub struct ConfigError {
    pub line: Option<usize>,
    pub field: String,
    pub kind: ConfigErrorKind,
}

impl ConfigError {
    pub fn new(line: Option<usize>, field: impl Into<String>, kind: ConfigErrorKind) -> Self {
        Self { line, field: field.into(), kind }
    }
}
