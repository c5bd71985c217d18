use std::time::Instant;

use rayon::prelude::*;

use super::{GroupingMethod, GroupingPlan, SgbdError};
use crate::evaluator::Evaluator;
use crate::instance::Instance;
use crate::method::SolverConfig;
use crate::milp::{self, MilpError, SolveLimits};
use crate::report::{Candidate, SolveReport, SolveStatus};
use crate::solution::FirstStageSolution;

#[derive(Debug, Clone, PartialEq)]
pub struct SgbdOutcome {
    pub solution: FirstStageSolution,
    pub report: SolveReport,
    /// The grouping of the iteration that produced the solution.
    pub plan: GroupingPlan,
}

struct GroupResult {
    candidate: Candidate,
    solution: Option<FirstStageSolution>,
    error: Option<MilpError>,
}

fn solve_group(
    inst: &Instance,
    scenarios: &[usize],
    cfg: &SolverConfig,
    limits: &SolveLimits,
    iteration: usize,
    group: usize,
) -> GroupResult {
    let mut candidate = Candidate {
        iteration,
        group,
        scenarios: scenarios.to_vec(),
        status: SolveStatus::Error,
        subproblem_objective: None,
        master_objective: None,
    };
    let solved = milp::build_extensive_form(inst, scenarios, cfg.formulation)
        .and_then(|handle| milp::solve(&handle, cfg.backend.as_ref(), limits));
    let (sol, sub) = match solved {
        Ok(x) => x,
        Err(e) => {
            candidate.status = match e {
                MilpError::Infeasible => SolveStatus::Infeasible,
                MilpError::NoIncumbent => SolveStatus::TimeLimit,
                _ => SolveStatus::Error,
            };
            log::warn!("iteration {iteration}, group {group}: {e}; skipped");
            return GroupResult {
                candidate,
                solution: None,
                error: Some(e),
            };
        }
    };
    candidate.status = sub.status;
    candidate.subproblem_objective = Some(sub.objective);
    match Evaluator::new(inst, &sol).and_then(|ev| ev.expected()) {
        Ok(master) => {
            candidate.master_objective = Some(master.objective);
            GroupResult {
                candidate,
                solution: Some(sol),
                error: None,
            }
        }
        Err(e) => GroupResult {
            candidate,
            solution: None,
            error: Some(e.into()),
        },
    }
}

fn solve_all(
    inst: &Instance,
    groups: &[Vec<usize>],
    cfg: &SolverConfig,
    limits: &SolveLimits,
    iteration: usize,
) -> Vec<GroupResult> {
    let one = |(g, s): (usize, &Vec<usize>)| solve_group(inst, s, cfg, limits, iteration, g);
    if cfg.parallel {
        groups.par_iter().enumerate().map(one).collect()
    } else {
        groups.iter().enumerate().map(one).collect()
    }
}

/// Lowest master objective, ties to the lower group index.
fn best(results: &[GroupResult]) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (g, r) in results.iter().enumerate() {
        if let (Some(z), Some(_)) = (r.candidate.master_objective, &r.solution) {
            if best.is_none_or(|(_, b)| z < b) {
                best = Some((g, z));
            }
        }
    }
    best.map(|(g, _)| g)
}

fn all_failed(results: Vec<GroupResult>) -> SgbdError {
    let last = results.into_iter().rev().find_map(|r| r.error);
    SgbdError::AllGroupsFailed(last.unwrap_or(MilpError::NoIncumbent))
}

fn finish(
    inst: &Instance,
    solution: FirstStageSolution,
    status: SolveStatus,
    method: &str,
    candidates: Vec<Candidate>,
    plan: GroupingPlan,
    started: Instant,
) -> Result<SgbdOutcome, SgbdError> {
    let mut report = Evaluator::new(inst, &solution)?.expected()?;
    report.method = method.into();
    report.status = status;
    report.candidates = candidates;
    report.wall_time_s = started.elapsed().as_secs_f64();
    Ok(SgbdOutcome {
        solution,
        report,
        plan,
    })
}

fn method_tag(method: GroupingMethod) -> &'static str {
    match method {
        GroupingMethod::Furthest => "f-sgbd",
        GroupingMethod::Closest => "c-sgbd",
        GroupingMethod::Random => "r-sgbd",
        GroupingMethod::Progressive => "p-sgbd",
        GroupingMethod::Given => "sgbd",
    }
}

/// Solves one subproblem per group of `plan` and returns the candidate
/// with the lowest objective over all scenarios.
///
/// Each subproblem gets `limits.time_limit / ng`. Groups without an
/// incumbent are skipped; the run fails only if every group does.
pub fn run_static_sgbd(inst: &Instance, plan: &GroupingPlan, cfg: &SolverConfig) -> Result<SgbdOutcome, SgbdError> {
    let started = Instant::now();
    plan.check_partition(inst.n_scenarios())?;
    let limits = cfg.limits.split(plan.n_groups());
    let results = solve_all(inst, &plan.groups, cfg, &limits, 1);
    let Some(g) = best(&results) else {
        return Err(all_failed(results));
    };
    let status = results[g].candidate.status;
    let candidates = results.iter().map(|r| r.candidate.clone()).collect();
    let solution = results.into_iter().nth(g).and_then(|r| r.solution).expect("best group has a solution");
    finish(inst, solution, status, method_tag(plan.method), candidates, plan.clone(), started)
}

/// Sorts groups by objective (failures last, ties by group index) and
/// unites every `alpha` consecutive groups of the sorted list.
pub fn merge_sorted_groups(groups: &[Vec<usize>], objectives: &[Option<f64>], alpha: usize) -> Vec<Vec<usize>> {
    let mut order: Vec<usize> = (0..groups.len()).collect();
    order.sort_by(|&a, &b| match (objectives[a], objectives[b]) {
        (Some(x), Some(y)) => x.total_cmp(&y),
        (Some(_), None) => std::cmp::Ordering::Less,
        (None, Some(_)) => std::cmp::Ordering::Greater,
        (None, None) => std::cmp::Ordering::Equal,
    });
    order
        .chunks(alpha.max(1))
        .map(|chunk| {
            let mut merged: Vec<usize> = chunk.iter().flat_map(|&g| groups[g].iter().copied()).collect();
            merged.sort_unstable();
            merged
        })
        .collect()
}

/// Progressive grouping: start from singleton groups and, after each
/// iteration but the last, merge every `alpha` groups of similar quality.
///
/// The time limit is shared evenly between iterations and, within one,
/// between its subproblems.
pub fn run_progressive_sgbd(
    inst: &Instance,
    alpha: usize,
    iterations: usize,
    cfg: &SolverConfig,
) -> Result<SgbdOutcome, SgbdError> {
    if alpha < 2 {
        return Err(SgbdError::MergeFactor(alpha));
    }
    if iterations == 0 {
        return Err(SgbdError::Iterations);
    }
    let started = Instant::now();
    let per_iteration = cfg.limits.split(iterations);
    let mut groups: Vec<Vec<usize>> = (0..inst.n_scenarios()).map(|w| vec![w]).collect();
    let mut candidates = Vec::new();
    for it in 1..=iterations {
        let limits = per_iteration.split(groups.len());
        let results = solve_all(inst, &groups, cfg, &limits, it);
        candidates.extend(results.iter().map(|r| r.candidate.clone()));
        if it < iterations {
            let objectives: Vec<Option<f64>> = results
                .iter()
                .map(|r| r.solution.as_ref().and(r.candidate.master_objective))
                .collect();
            groups = merge_sorted_groups(&groups, &objectives, alpha);
            continue;
        }
        let Some(g) = best(&results) else {
            return Err(all_failed(results));
        };
        let status = results[g].candidate.status;
        let solution = results.into_iter().nth(g).and_then(|r| r.solution).expect("best group has a solution");
        let plan = GroupingPlan {
            method: GroupingMethod::Progressive,
            groups,
            group_size: None,
            merge_factor: Some(alpha),
            iterations: Some(iterations),
            seed: None,
        };
        return finish(inst, solution, status, "p-sgbd", candidates, plan, started);
    }
    unreachable!("iterations >= 1")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn merge_follows_sorted_objectives() {
        let groups: Vec<Vec<usize>> = (0..6).map(|w| vec![w]).collect();
        let z = [5.0, 1.0, 3.0, 1.0, 9.0, 2.0].map(Some);
        let merged = merge_sorted_groups(&groups, &z, 2);
        // sorted: 1 (1.0), 3 (1.0), 5 (2.0), 2 (3.0), 0 (5.0), 4 (9.0)
        assert_eq!(merged, vec![vec![1, 3], vec![2, 5], vec![0, 4]]);
    }

    #[test]
    fn failed_groups_sort_last() {
        let groups: Vec<Vec<usize>> = (0..5).map(|w| vec![w]).collect();
        let z = [None, Some(2.0), None, Some(1.0), Some(3.0)];
        let merged = merge_sorted_groups(&groups, &z, 2);
        assert_eq!(merged, vec![vec![1, 3], vec![0, 4], vec![2]]);
    }
}
