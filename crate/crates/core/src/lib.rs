//! Collision-induced Zeno dynamics of a molecule with two rotational ladders.

pub mod analytic;
pub mod error;
pub mod lindblad;
pub mod model;
pub mod ode;
pub mod series;
pub mod stochastic;
pub mod trajectory;

pub use error::{Result, ZenoError};
pub use model::{ModelParams, EnergyConvention, LevelScheme};
pub use series::SeriesResult;
