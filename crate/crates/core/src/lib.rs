//! Recovery of a block of missing samples in a discrete-time complex sequence.
//!
//! Two estimators are provided:
//!
//! * [`blrecover`]: the restriction to the gap of the band-limited sequence
//!   closest to the observations, for a chosen cutoff `Ω ∈ (0, π)`.
//! * [`degrecover`]: the unique gap values that make the Z-transform and its
//!   first `m` derivatives vanish at a chosen point `e^{iω₀}`. Exact on
//!   sequences that are degenerate there, with no cutoff to choose.
//!
//! [`genlib`] synthesizes test paths, [`bounds`] evaluates the operator-norm
//! robustness bounds of both maps, and [`harness`] runs seeded Monte-Carlo
//! comparisons. The `gaprecover` binary exposes all of it on the command line.

pub mod blrecover;
pub mod bounds;
pub mod cli;
pub mod degrecover;
pub mod error;
pub mod genlib;
pub mod harness;
pub mod io;
pub mod linalg;
pub mod lowpass;
pub mod parallel;
pub mod sequence;

pub use blrecover::{recover_bl, recover_bl_single, BLRecoveryResult};
pub use degrecover::{minimax_error_identity, recover_deg, recover_deg_single, DegRecoveryResult};
pub use error::{RecoveryError, Result};
pub use lowpass::Kernel;
pub use parallel::Execution;
pub use sequence::{FiniteSequence, GapSpec, NormKind, SpectralProbe, C64};

/// Seed used by the CLI and the harness when none is given.
pub const DEFAULT_SEED: u64 = 20_130_501;
