//! Experiment harness for the AGTO optimizer.
//!
//! - [`run_campaign`] runs benchmark campaigns (runs x functions x
//!   {AGTO, GTO}) in parallel, writing per-run convergence curves and the
//!   summary, rank and p-value tables. A manifest in the output directory
//!   makes interrupted campaigns resumable.
//! - [`Tables`] recomputes the tables from a stored runs.csv.
//! - [`run_hpo_session`] tunes hyperparameters against the built-in
//!   surrogate or an external evaluator process.
//!
//! Seeds are derived per cell (see [`seed`]), so a campaign's output bytes
//! depend only on its configuration.

pub mod campaign;
pub mod config;
pub mod error;
pub mod hpo_session;
pub mod seed;
pub mod tables;

pub use campaign::{run_campaign, run_cell, Campaign, CellKey, MANIFEST};
pub use config::{parse_algorithms, parse_functions, Algorithm, BenchSettings, ExperimentConfig, FileConfig, HpoSettings};
pub use error::{HarnessError, Result};
pub use hpo_session::{run_hpo_session, HpoRun};
pub use seed::cell_seed;
pub use tables::{read_runs, RunRow, Tables};
