//! Deterministic master-equation integrators.
//!
//! `full` integrates the exact collision-averaged Lindblad equation on the
//! whole density matrix; `reduced` keeps only the level populations and the
//! ground-pair coherence, which is all that survives once the off-resonant
//! coherences are averaged out.

pub mod density;
pub mod full;
pub mod reduced;
pub mod residual;
pub mod spectral;

pub use density::DensityMatrix;
pub use full::{full_lindblad_rhs, integrate_full, FullOptions, FullRun};
pub use reduced::{integrate_reduced, reduced_rhs, ReducedState};
pub use residual::{second_order_pl_residual, ResidualTrack};
pub use spectral::{dominant_frequency, SpectralPeak};

use crate::error::{Result, ZenoError};
use crate::model::{build_level_scheme, EnergyConvention, LevelScheme, ModelParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeneratorMode {
    Full,
    Reduced,
    /// Reduced dynamics with the Rabi coupling switched off.
    ChainsOnly,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorSpec {
    pub mode: GeneratorMode,
    pub params: ModelParams,
    pub scheme: LevelScheme,
}

impl GeneratorSpec {
    pub fn new(mode: GeneratorMode, params: ModelParams) -> Result<Self> {
        params.validate()?;
        let scheme = build_level_scheme(&params, EnergyConvention::ShiftedGround);
        Ok(Self { mode, params, scheme })
    }

    /// The Rabi frequency as seen by this generator.
    pub fn rabi(&self) -> f64 {
        match self.mode {
            GeneratorMode::ChainsOnly => 0.0,
            _ => self.params.rabi,
        }
    }

    pub(crate) fn require(&self, allowed: &[GeneratorMode]) -> Result<()> {
        if allowed.contains(&self.mode) {
            Ok(())
        } else {
            Err(ZenoError::InvalidParameter { field: "mode", reason: format!("{:?} not supported here", self.mode) })
        }
    }
}
