//! From kick logs to loop labels, periods, regime verdicts, regime
//! boundaries and traveling-wave diagnostics.

pub mod boundary;
pub mod loops;
pub mod lyapunov;
pub mod period;
pub mod regime;
pub mod sweep;
pub mod wave;

use thiserror::Error;

pub use boundary::{locate_boundary, Boundary, BoundaryError, KnownBoundary, KNOWN_BOUNDARIES};
pub use loops::{extract_loops, Loop, LoopLabel, SpikeTrain};
pub use lyapunov::{contraction_over_period, lyapunov_g, steady_kick_state, Contraction};
pub use period::{detect_period, PeriodVerdict};
pub use regime::{
    classify_node, classify_regime, filtering_report, MmoSignature, RegimeLabel, RegimeReport,
};
pub use sweep::{alpha_grid, grid_brackets, run_sweep, SWEEP_WORKERS};
pub use wave::{t_e_formula, wave_diagnostics, PulseDelay, WaveReport};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalysisError {
    #[error("need at least {needed} post-transient kicks, found {found}")]
    InsufficientData { needed: usize, found: usize },
    #[error("wave diagnostics need at least 3 nodes, got {0}")]
    TooFewNodes(usize),
}
