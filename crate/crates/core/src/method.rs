//! One entry point for every solution method.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::analysis::baseline_schedule;
use crate::evaluator::{EvalError, Evaluator};
use crate::instance::{validate_instance, Instance, Violation};
use crate::milp::{self, FormulationOptions, HighsBackend, MilpError, SolveLimits, SolverBackend};
use crate::report::SolveReport;
use crate::sgbd::{self, GroupingPlan, SgbdError};
use crate::solution::FirstStageSolution;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "kebab-case")]
pub enum Method {
    Exact,
    #[serde(rename = "p-sgbd")]
    ProgressiveSgbd { merge_factor: usize, iterations: usize },
    #[serde(rename = "f-sgbd")]
    FurthestSgbd { group_size: usize },
    #[serde(rename = "c-sgbd")]
    ClosestSgbd { group_size: usize },
    #[serde(rename = "r-sgbd")]
    RandomSgbd { group_size: usize },
    Baseline,
    #[serde(rename = "mvp")]
    MeanValue,
}

impl Method {
    pub fn tag(&self) -> &'static str {
        match self {
            Method::Exact => "exact",
            Method::ProgressiveSgbd { .. } => "p-sgbd",
            Method::FurthestSgbd { .. } => "f-sgbd",
            Method::ClosestSgbd { .. } => "c-sgbd",
            Method::RandomSgbd { .. } => "r-sgbd",
            Method::Baseline => "baseline",
            Method::MeanValue => "mvp",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// Backend, limits and model options shared by all MILP solves of a run.
#[derive(Clone)]
pub struct SolverConfig {
    pub backend: Arc<dyn SolverBackend>,
    pub limits: SolveLimits,
    pub formulation: FormulationOptions,
    /// Solve independent subproblems concurrently.
    pub parallel: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            backend: Arc::new(HighsBackend::new()),
            limits: SolveLimits::default(),
            formulation: FormulationOptions::default(),
            parallel: true,
        }
    }
}

impl fmt::Debug for SolverConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SolverConfig")
            .field("backend", &self.backend.name())
            .field("limits", &self.limits)
            .field("formulation", &self.formulation)
            .field("parallel", &self.parallel)
            .finish()
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MethodError {
    #[error("invalid instance: {}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    InvalidInstance(Vec<Violation>),
    #[error(transparent)]
    Milp(#[from] MilpError),
    #[error(transparent)]
    Sgbd(#[from] SgbdError),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

impl MethodError {
    pub fn is_infeasible(&self) -> bool {
        matches!(self.root(), Some(MilpError::Infeasible))
    }

    pub fn is_timeout(&self) -> bool {
        matches!(self.root(), Some(MilpError::NoIncumbent))
    }

    pub fn is_config(&self) -> bool {
        matches!(
            self,
            MethodError::InvalidInstance(_)
                | MethodError::Sgbd(
                    SgbdError::GroupSize { .. }
                        | SgbdError::MergeFactor(_)
                        | SgbdError::Iterations
                        | SgbdError::NotAPartition { .. }
                )
                | MethodError::Milp(MilpError::InvalidInstance(_))
        )
    }

    fn root(&self) -> Option<&MilpError> {
        match self {
            MethodError::Milp(e) | MethodError::Sgbd(SgbdError::AllGroupsFailed(e)) => Some(e),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MethodOutcome {
    pub solution: FirstStageSolution,
    /// Objective and expectations always refer to the full scenario set.
    pub report: SolveReport,
    /// Present for the decomposition methods.
    pub plan: Option<GroupingPlan>,
}

/// Runs `method` on `inst`. `seed` drives the scenario grouping of the
/// static decompositions; the backend seed comes from `cfg.limits`.
pub fn solve_with_method(
    inst: &Instance,
    method: Method,
    cfg: &SolverConfig,
    seed: u64,
) -> Result<MethodOutcome, MethodError> {
    let violations = validate_instance(inst);
    if !violations.is_empty() {
        return Err(MethodError::InvalidInstance(violations));
    }
    let static_plan = match method {
        Method::FurthestSgbd { group_size } => Some(sgbd::group_furthest(inst, group_size, seed)?),
        Method::ClosestSgbd { group_size } => Some(sgbd::group_closest(inst, group_size, seed)?),
        Method::RandomSgbd { group_size } => Some(sgbd::group_random(inst, group_size, seed)?),
        _ => None,
    };
    if let Some(plan) = static_plan {
        let out = sgbd::run_static_sgbd(inst, &plan, cfg)?;
        return Ok(MethodOutcome {
            solution: out.solution,
            report: out.report,
            plan: Some(out.plan),
        });
    }

    match method {
        Method::Exact => {
            let (solution, report) =
                milp::solve_extensive_form(inst, cfg.backend.as_ref(), &cfg.limits, cfg.formulation)?;
            Ok(MethodOutcome {
                solution,
                report,
                plan: None,
            })
        }
        Method::ProgressiveSgbd {
            merge_factor,
            iterations,
        } => {
            let out = sgbd::run_progressive_sgbd(inst, merge_factor, iterations, cfg)?;
            Ok(MethodOutcome {
                solution: out.solution,
                report: out.report,
                plan: Some(out.plan),
            })
        }
        Method::Baseline => {
            let solution = baseline_schedule(inst);
            let mut report = Evaluator::new(inst, &solution)?.expected()?;
            report.method = "baseline".into();
            Ok(MethodOutcome {
                solution,
                report,
                plan: None,
            })
        }
        Method::MeanValue => {
            let handle = milp::build_mean_value_problem(inst, cfg.formulation)?;
            let (solution, mvp) = milp::solve(&handle, cfg.backend.as_ref(), &cfg.limits)?;
            let mut report = Evaluator::new(inst, &solution)?.expected()?;
            report.method = "mvp".into();
            report.status = mvp.status;
            report.wall_time_s = mvp.wall_time_s;
            Ok(MethodOutcome {
                solution,
                report,
                plan: None,
            })
        }
        _ => unreachable!("static decompositions handled above"),
    }
}
