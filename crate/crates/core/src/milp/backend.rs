//! Solver backends. The formulation layer only talks to
//! [`SolverBackend`]; HiGHS is the bundled implementation.

use std::time::Duration;

use highs::{HighsModelStatus, HighsSolutionStatus, RowProblem, Sense};
use serde::{Deserialize, Serialize};

use super::model::LinearModel;
use crate::report::SolveStatus;

/// What a backend can handle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Capabilities {
    pub binary: bool,
    pub integer: bool,
    pub continuous: bool,
    pub time_limit: bool,
    pub gap_target: bool,
    pub deterministic_seed: bool,
}

/// Termination criteria handed to the backend.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolveLimits {
    pub time_limit: Option<Duration>,
    pub relative_gap: f64,
    pub absolute_gap: f64,
    pub seed: u64,
}

impl Default for SolveLimits {
    /// No time limit; proven optimal up to an absolute gap of 1e-6.
    fn default() -> Self {
        Self {
            time_limit: None,
            relative_gap: 0.0,
            absolute_gap: 1e-6,
            seed: 0,
        }
    }
}

impl SolveLimits {
    pub fn with_time_limit(mut self, limit: Duration) -> Self {
        self.time_limit = Some(limit);
        self
    }

    /// Same gap targets, time limit divided by `parts`.
    pub fn split(&self, parts: usize) -> Self {
        let mut out = *self;
        if let Some(t) = self.time_limit {
            out.time_limit = Some(t / parts.max(1) as u32);
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BackendResult {
    pub status: SolveStatus,
    /// Incumbent column values, if one was found.
    pub values: Option<Vec<f64>>,
    pub objective: Option<f64>,
    /// Best proven lower bound.
    pub bound: Option<f64>,
}

pub trait SolverBackend: Send + Sync {
    fn name(&self) -> &str;
    fn capabilities(&self) -> Capabilities;
    fn solve(&self, model: &LinearModel, limits: &SolveLimits) -> BackendResult;
}

/// HiGHS through the `highs` crate.
#[derive(Debug, Clone, Default)]
pub struct HighsBackend {
    pub verbose: bool,
}

impl HighsBackend {
    pub fn new() -> Self {
        Self::default()
    }
}

impl SolverBackend for HighsBackend {
    fn name(&self) -> &str {
        "highs"
    }

    fn capabilities(&self) -> Capabilities {
        Capabilities {
            binary: true,
            integer: true,
            continuous: true,
            time_limit: true,
            gap_target: true,
            deterministic_seed: true,
        }
    }

    fn solve(&self, model: &LinearModel, limits: &SolveLimits) -> BackendResult {
        let mut pb = RowProblem::default();
        let cols: Vec<_> = model
            .columns
            .iter()
            .map(|c| pb.add_column_with_integrality(c.objective, c.lower..=c.upper, c.kind.is_integral()))
            .collect();
        for row in &model.rows {
            let terms: Vec<_> = row.terms.iter().map(|&(v, c)| (cols[v.0], c)).collect();
            pb.add_row(row.lower..=row.upper, terms);
        }

        let mut solver = pb.optimise(Sense::Minimise);
        if !self.verbose {
            solver.make_quiet();
        }
        let is_mip = model.n_integral() > 0;
        let seed = (limits.seed % i32::MAX as u64) as i32;
        let mut options_ok = solver.try_set_option("random_seed", seed).is_ok()
            && solver.try_set_option("primal_feasibility_tolerance", 1e-9).is_ok()
            && solver.try_set_option("dual_feasibility_tolerance", 1e-9).is_ok();
        if is_mip {
            options_ok &= solver.try_set_option("mip_rel_gap", limits.relative_gap).is_ok()
                && solver.try_set_option("mip_abs_gap", limits.absolute_gap).is_ok()
                && solver.try_set_option("mip_feasibility_tolerance", 1e-9).is_ok();
        }
        if let Some(t) = limits.time_limit {
            options_ok &= solver.try_set_option("time_limit", t.as_secs_f64().max(1e-3)).is_ok();
        }
        if !options_ok {
            log::error!("HiGHS rejected an option");
            return failed(SolveStatus::Error);
        }

        let solved = match solver.try_solve() {
            Ok(s) => s,
            Err(status) => {
                log::error!("HiGHS run failed: {status:?}");
                return failed(SolveStatus::Error);
            }
        };

        let has_incumbent = solved.primal_solution_status() == HighsSolutionStatus::Feasible;
        let model_status = solved.status();
        let status = match model_status {
            HighsModelStatus::Optimal => SolveStatus::Optimal,
            // Every objective coefficient of our models is non-negative on
            // non-negative columns, so the ambiguous status means infeasible.
            HighsModelStatus::Infeasible | HighsModelStatus::UnboundedOrInfeasible => SolveStatus::Infeasible,
            HighsModelStatus::ReachedTimeLimit
            | HighsModelStatus::ReachedIterationLimit
            | HighsModelStatus::ReachedSolutionLimit
            | HighsModelStatus::ReachedInterrupt => {
                if has_incumbent {
                    SolveStatus::FeasibleWithGap
                } else {
                    SolveStatus::TimeLimit
                }
            }
            other => {
                log::warn!("HiGHS finished with status {other:?}");
                SolveStatus::Error
            }
        };
        if !has_incumbent || matches!(status, SolveStatus::Infeasible | SolveStatus::Error) {
            return failed(status);
        }

        let objective = solved.objective_value();
        let bound = if is_mip {
            solved.double_info_value(c"mip_dual_bound").ok()
        } else {
            Some(objective)
        };
        BackendResult {
            status,
            values: Some(solved.get_solution().columns().to_vec()),
            objective: Some(objective),
            bound,
        }
    }
}

fn failed(status: SolveStatus) -> BackendResult {
    BackendResult {
        status,
        values: None,
        objective: None,
        bound: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::milp::model::VarKind;

    #[test]
    fn small_mip() {
        // min -x - 2y  s.t. x + y <= 1.5, x, y binary  ->  y = 1, x = 0
        let mut m = LinearModel::new();
        let x = m.add_column("x", VarKind::Binary, 0.0, 1.0, -1.0);
        let y = m.add_column("y", VarKind::Binary, 0.0, 1.0, -2.0);
        m.add_row("c", vec![(x, 1.0), (y, 1.0)], f64::NEG_INFINITY, 1.5);
        let res = HighsBackend::new().solve(&m, &SolveLimits::default());
        assert_eq!(res.status, SolveStatus::Optimal);
        let v = res.values.unwrap();
        assert!(v[0].abs() < 1e-9 && (v[1] - 1.0).abs() < 1e-9);
        assert!((res.objective.unwrap() + 2.0).abs() < 1e-9);
    }

    #[test]
    fn infeasible_lp() {
        let mut m = LinearModel::new();
        let x = m.add_column("x", VarKind::Continuous, 0.0, 1.0, 1.0);
        m.add_row("c", vec![(x, 1.0)], 2.0, f64::INFINITY);
        let res = HighsBackend::new().solve(&m, &SolveLimits::default());
        assert_eq!(res.status, SolveStatus::Infeasible);
        assert!(res.values.is_none());
    }
}
