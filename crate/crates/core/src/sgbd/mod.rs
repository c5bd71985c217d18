//! Scenario-grouping decomposition: partition the scenarios, solve the
//! extensive form per group, score every group's first stage on the whole
//! scenario set and keep the best.

mod decomposition;
mod grouping;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use decomposition::{merge_sorted_groups, run_progressive_sgbd, run_static_sgbd, SgbdOutcome};
pub use grouping::{
    group_by_centroid_with, group_closest, group_furthest, group_random, scenario_distance, Centroid, Selection,
};

use crate::evaluator::EvalError;
use crate::milp::MilpError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SgbdError {
    #[error("duration vectors differ in length ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("group size {size} outside 1..={scenarios}")]
    GroupSize { size: usize, scenarios: usize },
    #[error("merge factor must be at least 2, got {0}")]
    MergeFactor(usize),
    #[error("iteration limit must be at least 1")]
    Iterations,
    #[error("plan is not a disjoint cover of {scenarios} scenarios: {detail}")]
    NotAPartition { scenarios: usize, detail: String },
    #[error("every group subproblem failed; last error: {0}")]
    AllGroupsFailed(MilpError),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GroupingMethod {
    Furthest,
    Closest,
    Random,
    Progressive,
    /// Supplied by the caller.
    Given,
}

/// A partition of the scenario indices into groups, with the parameters
/// that produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupingPlan {
    pub method: GroupingMethod,
    pub groups: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group_size: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub merge_factor: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub iterations: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl GroupingPlan {
    pub fn from_groups(groups: Vec<Vec<usize>>) -> Self {
        Self {
            method: GroupingMethod::Given,
            groups,
            group_size: None,
            merge_factor: None,
            iterations: None,
            seed: None,
        }
    }

    pub fn n_groups(&self) -> usize {
        self.groups.len()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.groups.iter().map(Vec::len).collect()
    }

    /// Checks that the groups are non-empty, pairwise disjoint and cover
    /// `0..n_scenarios`.
    pub fn check_partition(&self, n_scenarios: usize) -> Result<(), SgbdError> {
        let fail = |detail: String| SgbdError::NotAPartition {
            scenarios: n_scenarios,
            detail,
        };
        let mut seen = vec![false; n_scenarios];
        for (g, group) in self.groups.iter().enumerate() {
            if group.is_empty() {
                return Err(fail(format!("group {g} is empty")));
            }
            for &w in group {
                if w >= n_scenarios {
                    return Err(fail(format!("group {g} holds scenario {w}")));
                }
                if std::mem::replace(&mut seen[w], true) {
                    return Err(fail(format!("scenario {w} appears twice")));
                }
            }
        }
        match seen.iter().position(|s| !s) {
            Some(w) => Err(fail(format!("scenario {w} is not covered"))),
            None => Ok(()),
        }
    }
}

/// Number of groups and the size of the last one for target size `z`.
pub fn group_layout(n_scenarios: usize, z: usize) -> (usize, usize) {
    let ng = n_scenarios.div_ceil(z);
    (ng, n_scenarios - z * (ng - 1))
}
