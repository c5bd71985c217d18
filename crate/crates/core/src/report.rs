use serde::{Deserialize, Serialize};

/// Outcome class of a MILP solve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolveStatus {
    Optimal,
    FeasibleWithGap,
    Infeasible,
    TimeLimit,
    Error,
}

/// One scenario-group subproblem of a decomposition run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Candidate {
    pub iteration: usize,
    pub group: usize,
    pub scenarios: Vec<usize>,
    pub status: SolveStatus,
    /// Objective of the group subproblem over its own scenarios.
    pub subproblem_objective: Option<f64>,
    /// The candidate's first stage evaluated over every scenario.
    pub master_objective: Option<f64>,
}

/// Summary of a solve or an evaluation.
///
/// `objective = lambda * expected_wait + (1 - lambda) * expected_overtime`,
/// where the expectations are means over scenarios of the per-scenario
/// totals. `wall_time_s` is not serialized so that report files of
/// identical runs are byte-identical.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub method: String,
    pub status: SolveStatus,
    pub objective: f64,
    pub expected_wait: f64,
    pub expected_overtime: f64,
    #[serde(skip)]
    pub wall_time_s: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact_reference: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gap_percent: Option<f64>,
    /// Scenarios in which some nurse overtime exceeds the limit.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub overtime_limit_violations: Vec<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub candidates: Vec<Candidate>,
}

impl SolveReport {
    /// Sets the exact reference and the relative gap `100 (z - z*) / z*`.
    pub fn with_reference(mut self, exact: f64) -> Self {
        self.exact_reference = Some(exact);
        self.gap_percent = Some(gap_percent(self.objective, exact));
        self
    }
}

pub fn gap_percent(objective: f64, exact: f64) -> f64 {
    if exact.abs() < 1e-12 {
        if objective.abs() < 1e-12 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        100.0 * (objective - exact) / exact
    }
}
