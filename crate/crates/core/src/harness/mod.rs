//! Seeded Monte Carlo sweeps over `(N, K)`, concentration checks against
//! the closed-form bounds, CSV output and the `mixcut` command line.

pub mod cli;
pub mod config;
pub mod format;
pub mod runner;
pub mod verify;

pub use config::{ExperimentConfig, ModelSource};
pub use runner::{
    aggregate, phase_diagram, read_csv, run_cell, run_sweep, trial_seed, write_csv, CellAggregate,
    PhaseRow, RequiredCase, TrialRecord, CSV_HEADER,
};
pub use verify::{verify_concentration, CheckRow, CheckStatus, VerifyConfig, VerifyReport};
