//! Extensive-form model construction over an abstract MILP backend.

mod backend;
mod formulation;
mod model;

use thiserror::Error;

pub use backend::{BackendResult, Capabilities, HighsBackend, SolveLimits, SolverBackend};
pub use formulation::{
    build_extensive_form, build_mean_value_problem, evaluate_fixed_first_stage, evaluate_fixed_first_stage_lp,
    mean_value_instance, solve, solve_extensive_form, Family, FixedStageLp, FormulationOptions, ModelHandle, RowKey,
    VarKey,
};
pub use model::{Column, LinearModel, Row, VarId, VarKind};

use crate::evaluator::EvalError;
use crate::instance::Violation;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MilpError {
    #[error("empty scenario subset")]
    EmptySubset,
    #[error("scenario {0} out of range")]
    ScenarioOutOfRange(usize),
    #[error("invalid instance: {}", join(.0))]
    InvalidInstance(Vec<Violation>),
    #[error("{0}")]
    Dimension(String),
    #[error("model is infeasible")]
    Infeasible,
    #[error("no incumbent found within the limits")]
    NoIncumbent,
    #[error("backend failure: {0}")]
    Backend(String),
    #[error("incumbent fails first-stage validation: {}", join(.0))]
    InvalidIncumbent(Vec<Violation>),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

fn join(v: &[Violation]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}
