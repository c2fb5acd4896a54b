//! Interference alignment for multiuser MIMO interference channels with an
//! eavesdropper.
//!
//! The crate provides the wiretapped-signal-leakage-minimization (WSLM)
//! alternating solver and its conventional leakage-minimization baseline,
//! achievable/leakage/secrecy rate metrics, properness counting, and Monte
//! Carlo sweep drivers with CSV and SVG output.

pub mod channel;
pub mod cli;
pub mod error;
pub mod feasibility;
pub mod harness;
pub mod io;
pub mod matrix;
pub mod plot;
pub mod rates;
pub mod solver;

pub use channel::{generate_channels, load_channels, save_channels, ChannelSet, SystemConfig};
pub use error::{Error, Result};
pub use feasibility::{is_proper, FeasibilityReport};
pub use harness::{ExperimentSpec, Sweep, SweepResult};
pub use matrix::ComplexMatrix;
pub use rates::{rate_report, RateReport};
pub use solver::{solve, IaSolution, PrecoderSet, SolverOptions, SubspaceSet, Variant};
