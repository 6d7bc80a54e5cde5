use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ZenoError {
    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParameter { field: &'static str, reason: String },

    #[error("ground pair is not degenerate (E_1L = {left}, E_1R = {right}); the free propagator needs the shifted-ground convention")]
    NonDegenerateGround { left: f64, right: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("time grid must be non-empty, non-negative and strictly increasing")]
    BadTimeGrid,

    #[error("stiffness guard: about {estimated} steps needed, cap is {cap}")]
    TooStiff { estimated: u64, cap: u64 },

    #[error("integrator exceeded {0} steps")]
    StepLimit(usize),

    #[error("integrator step size underflow at t = {0}")]
    StepUnderflow(f64),

    #[error("grid too coarse for second differences: {0}")]
    CoarseGrid(String),

    #[error("argument out of range: {0}")]
    OutOfRange(String),

    #[error("series lacks required observable `{0}`")]
    MissingObservable(&'static str),
}

pub type Result<T> = std::result::Result<T, ZenoError>;
