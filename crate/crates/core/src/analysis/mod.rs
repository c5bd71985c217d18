//! Baseline schedules, value of the stochastic solution and parameter
//! sweeps.

mod baseline;
mod sweep;
mod vss;

use thiserror::Error;

pub use baseline::{baseline_schedule, baseline_schedule_with, SECOND_SLOT};
pub use sweep::{run_sweep, sweep_instances, SweepCell, SweepParameter, SweepRow, SweepSpec, SweepTable};
pub use vss::{compute_vss, vss_csv, VssRow};

use crate::method::MethodError;
use crate::sampler::SamplerError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnalysisError {
    #[error("invalid sweep: {0}")]
    Spec(String),
    #[error(transparent)]
    Sampler(#[from] SamplerError),
    #[error(transparent)]
    Method(#[from] MethodError),
}
