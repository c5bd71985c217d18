//! Closed-form second stage.
//!
//! With the first stage fixed, the recourse problem of one scenario is a
//! longest-path computation over the precedence graph of patients that
//! share a nurse or a chair. Every objective coefficient on waits and
//! overtimes is nonnegative and every constraint lower-bounds one variable
//! by a nondecreasing function of the others, so the componentwise-least
//! fixed point computed here is the LP optimum.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use thiserror::Error;

use crate::instance::Instance;
use crate::report::{SolveReport, SolveStatus};
use crate::solution::{FirstStageSolution, ScenarioOutcome};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EvalError {
    #[error("solution has {solution} patients, instance has {instance}")]
    DimensionMismatch { instance: usize, solution: usize },
    #[error("scenario {0} out of range")]
    ScenarioOutOfRange(usize),
    #[error("empty scenario subset")]
    EmptySubset,
    #[error("precedence cycle on shared resources among patients {0:?}")]
    Cycle(Vec<usize>),
}

/// Why patient `j` must wait for its predecessor `i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeKind {
    /// Same nurse: `j` starts after `i`'s premedication, delay `s`.
    Nurse,
    /// Same chair: `j` starts after `i`'s whole treatment, delay `s + t_i`.
    /// Dominates the nurse edge when both resources are shared.
    Chair,
}

/// Precedence graph induced by a first stage.
#[derive(Debug, Clone)]
pub struct PrecedenceDag {
    order: Vec<usize>,
    incoming: Vec<Vec<(usize, EdgeKind)>>,
}

impl PrecedenceDag {
    pub fn build(sol: &FirstStageSolution) -> Result<Self, EvalError> {
        let order = Self::topological_order(sol).map_err(EvalError::Cycle)?;
        let n = sol.n_patients();
        let mut incoming = vec![Vec::new(); n];
        for (j, inc) in incoming.iter_mut().enumerate() {
            for i in 0..n {
                if let Some(kind) = edge(sol, i, j) {
                    inc.push((i, kind));
                }
            }
        }
        Ok(Self { order, incoming })
    }

    /// Kahn's algorithm, smallest ready index first. On failure returns
    /// the patients left on a cycle.
    pub fn topological_order(sol: &FirstStageSolution) -> Result<Vec<usize>, Vec<usize>> {
        let n = sol.n_patients();
        let mut indegree = vec![0usize; n];
        for i in 0..n {
            for (j, deg) in indegree.iter_mut().enumerate() {
                if edge(sol, i, j).is_some() {
                    *deg += 1;
                }
            }
        }
        let mut ready: BinaryHeap<Reverse<usize>> =
            (0..n).filter(|&i| indegree[i] == 0).map(Reverse).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(Reverse(i)) = ready.pop() {
            order.push(i);
            for j in 0..n {
                if edge(sol, i, j).is_some() {
                    indegree[j] -= 1;
                    if indegree[j] == 0 {
                        ready.push(Reverse(j));
                    }
                }
            }
        }
        if order.len() == n {
            Ok(order)
        } else {
            Err((0..n).filter(|&i| indegree[i] > 0).collect())
        }
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn predecessors(&self, j: usize) -> &[(usize, EdgeKind)] {
        &self.incoming[j]
    }
}

fn edge(sol: &FirstStageSolution, i: usize, j: usize) -> Option<EdgeKind> {
    if i == j || !sol.precedence[i][j] {
        None
    } else if sol.chair[i] == sol.chair[j] {
        Some(EdgeKind::Chair)
    } else if sol.nurse[i] == sol.nurse[j] {
        Some(EdgeKind::Nurse)
    } else {
        None
    }
}

/// Evaluates one first stage against many scenarios, building the
/// precedence graph once.
#[derive(Debug, Clone)]
pub struct Evaluator<'a> {
    inst: &'a Instance,
    sol: &'a FirstStageSolution,
    dag: PrecedenceDag,
}

impl<'a> Evaluator<'a> {
    pub fn new(inst: &'a Instance, sol: &'a FirstStageSolution) -> Result<Self, EvalError> {
        if sol.n_patients() != inst.n_patients()
            || sol.nurse.len() != inst.n_patients()
            || sol.chair.len() != inst.n_patients()
            || sol.precedence.len() != inst.n_patients()
        {
            return Err(EvalError::DimensionMismatch {
                instance: inst.n_patients(),
                solution: sol.n_patients(),
            });
        }
        Ok(Self {
            inst,
            sol,
            dag: PrecedenceDag::build(sol)?,
        })
    }

    pub fn dag(&self) -> &PrecedenceDag {
        &self.dag
    }

    pub fn scenario(&self, w: usize) -> Result<ScenarioOutcome, EvalError> {
        let durations = self
            .inst
            .scenarios
            .get(w)
            .ok_or(EvalError::ScenarioOutOfRange(w))?;
        Ok(self.with_durations(durations))
    }

    /// Outcome for an arbitrary duration vector.
    pub fn with_durations(&self, durations: &[f64]) -> ScenarioOutcome {
        let inst = self.inst;
        let sol = self.sol;
        let s = inst.premed_duration;
        let a = &sol.appointments;

        let mut waits = vec![0.0; inst.n_patients()];
        for &j in &self.dag.order {
            let mut wait = 0.0_f64;
            for &(i, kind) in &self.dag.incoming[j] {
                let delay = match kind {
                    EdgeKind::Nurse => s,
                    EdgeKind::Chair => s + durations[i],
                };
                wait = wait.max(a[i] + waits[i] + delay - a[j]);
            }
            waits[j] = wait;
        }

        let mut overtimes = vec![0.0_f64; inst.nurse_count];
        for (i, &n) in sol.nurse.iter().enumerate() {
            let finish = a[i] + waits[i] + s + durations[i];
            overtimes[n] = overtimes[n].max(finish - inst.shift_length);
        }

        let total_wait: f64 = waits.iter().sum();
        let total_overtime: f64 = overtimes.iter().sum();
        ScenarioOutcome {
            cost: inst.lambda * total_wait + (1.0 - inst.lambda) * total_overtime,
            exceeds_overtime_limit: overtimes.iter().any(|&o| o > inst.overtime_limit + 1e-9),
            waits,
            overtimes,
        }
    }

    /// Mean cost, wait and overtime over `subset`, summed in subset order.
    pub fn expected_over(&self, subset: &[usize]) -> Result<SolveReport, EvalError> {
        if subset.is_empty() {
            return Err(EvalError::EmptySubset);
        }
        let mut cost = 0.0;
        let mut wait = 0.0;
        let mut overtime = 0.0;
        let mut violations = Vec::new();
        for &w in subset {
            let out = self.scenario(w)?;
            cost += out.cost;
            wait += out.total_wait();
            overtime += out.total_overtime();
            if out.exceeds_overtime_limit {
                violations.push(w);
            }
        }
        let n = subset.len() as f64;
        Ok(SolveReport {
            method: "evaluation".into(),
            status: SolveStatus::Optimal,
            objective: cost / n,
            expected_wait: wait / n,
            expected_overtime: overtime / n,
            wall_time_s: 0.0,
            bound: None,
            exact_reference: None,
            gap_percent: None,
            overtime_limit_violations: violations,
            candidates: Vec::new(),
        })
    }

    pub fn expected(&self) -> Result<SolveReport, EvalError> {
        let all: Vec<usize> = (0..self.inst.n_scenarios()).collect();
        self.expected_over(&all)
    }
}

/// Minimal waits and overtimes of scenario `w` under a fixed first stage.
pub fn evaluate_scenario(inst: &Instance, sol: &FirstStageSolution, w: usize) -> Result<ScenarioOutcome, EvalError> {
    Evaluator::new(inst, sol)?.scenario(w)
}

/// Expected cost over all scenarios. Scenarios in which the overtime limit
/// is exceeded are listed in the report rather than clamped.
pub fn evaluate_expected(inst: &Instance, sol: &FirstStageSolution) -> Result<SolveReport, EvalError> {
    Evaluator::new(inst, sol)?.expected()
}

/// Expected cost over a subset of scenarios.
pub fn evaluate_subset(inst: &Instance, sol: &FirstStageSolution, subset: &[usize]) -> Result<SolveReport, EvalError> {
    Evaluator::new(inst, sol)?.expected_over(subset)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solution::validate_first_stage;

    /// Nine patients, two nurses, three chairs, one scenario: the clinic
    /// example with appointments 0,115,58,168,166,15,251,0,234.
    pub(crate) fn clinic_example() -> (Instance, FirstStageSolution) {
        let durations = vec![39.0, 117.0, 23.0, 38.0, 73.0, 161.0, 25.0, 185.0, 31.0];
        let inst = Instance::new(2, 3, 15.0, 240.0, 0.3, 0, vec![durations]);
        let a = vec![0.0, 115.0, 58.0, 168.0, 166.0, 15.0, 251.0, 0.0, 234.0];
        // 1-based odd patients on nurse 1, even on nurse 2.
        let nurse = vec![0, 1, 0, 1, 0, 1, 0, 1, 0];
        // chair 1: 1,3,2,7   chair 2: 8,5   chair 3: 6,4,9
        let chair = vec![0, 0, 0, 2, 1, 2, 0, 1, 2];
        (inst, FirstStageSolution::from_appointments(a, nurse, chair))
    }

    #[test]
    fn clinic_example_waits_and_overtimes() {
        let (inst, sol) = clinic_example();
        assert!(validate_first_stage(&inst, &sol).is_empty());
        let out = evaluate_scenario(&inst, &sol, 0).unwrap();
        assert_eq!(out.waits, vec![0.0, 0.0, 0.0, 23.0, 34.0, 0.0, 8.0, 0.0, 10.0]);
        assert_eq!(out.total_wait(), 75.0);
        // Nurse 1 ends with patient 7 at 299. Nurse 2's last finish is
        // patient 2 at 115 + 15 + 117 = 247.
        assert_eq!(out.overtimes, vec![59.0, 7.0]);
        assert!((out.cost - (0.3 * 75.0 + 0.7 * 66.0)).abs() < 1e-9);
        assert!(!out.exceeds_overtime_limit);
    }

    #[test]
    fn single_patient_no_wait_no_overtime() {
        let inst = Instance::new(1, 1, 15.0, 240.0, 0.5, 0, vec![vec![100.0]]);
        let sol = FirstStageSolution::from_appointments(vec![0.0], vec![0], vec![0]);
        let out = evaluate_scenario(&inst, &sol, 0).unwrap();
        assert_eq!(out.waits, vec![0.0]);
        assert_eq!(out.overtimes, vec![0.0]);
        assert_eq!(out.cost, 0.0);
    }

    #[test]
    fn overtime_limit_is_flagged() {
        let mut inst = Instance::new(1, 1, 15.0, 240.0, 0.5, 0, vec![vec![300.0]]);
        inst.overtime_limit = 30.0;
        let sol = FirstStageSolution::from_appointments(vec![0.0], vec![0], vec![0]);
        let rep = evaluate_expected(&inst, &sol).unwrap();
        assert_eq!(rep.expected_overtime, 75.0);
        assert_eq!(rep.overtime_limit_violations, vec![0]);
    }

    #[test]
    fn shared_chair_and_nurse_uses_chair_delay() {
        let inst = Instance::new(1, 1, 15.0, 240.0, 0.5, 0, vec![vec![60.0, 60.0]]);
        let sol = FirstStageSolution::from_appointments(vec![0.0, 10.0], vec![0, 0], vec![0, 0]);
        let out = evaluate_scenario(&inst, &sol, 0).unwrap();
        assert_eq!(out.waits, vec![0.0, 65.0]);
    }

    #[test]
    fn single_scenario_mean_equals_scenario() {
        let (inst, sol) = clinic_example();
        let rep = evaluate_expected(&inst, &sol).unwrap();
        let out = evaluate_scenario(&inst, &sol, 0).unwrap();
        assert_eq!(rep.objective, out.cost);
        assert_eq!(rep.expected_wait, 75.0);
    }

    #[test]
    fn identical_scenarios_give_single_scenario_cost() {
        let (mut inst, sol) = clinic_example();
        let row = inst.scenarios[0].clone();
        inst.scenarios = vec![row; 5];
        let rep = evaluate_expected(&inst, &sol).unwrap();
        let one = evaluate_scenario(&inst, &sol, 3).unwrap();
        assert!((rep.objective - one.cost).abs() < 1e-12);
    }

    #[test]
    fn cycle_is_an_error() {
        let inst = Instance::new(1, 1, 15.0, 240.0, 0.5, 0, vec![vec![10.0, 10.0]]);
        let sol = FirstStageSolution {
            precedence: vec![vec![false, true], vec![true, false]],
            appointments: vec![0.0, 0.0],
            nurse: vec![0, 0],
            chair: vec![0, 0],
        };
        assert_eq!(evaluate_scenario(&inst, &sol, 0).unwrap_err(), EvalError::Cycle(vec![0, 1]));
    }

    #[test]
    fn bad_scenario_index_and_dimensions() {
        let (inst, sol) = clinic_example();
        assert_eq!(evaluate_scenario(&inst, &sol, 4).unwrap_err(), EvalError::ScenarioOutOfRange(4));
        let small = Instance::new(1, 1, 15.0, 240.0, 0.5, 0, vec![vec![10.0]]);
        assert!(matches!(
            evaluate_scenario(&small, &sol, 0),
            Err(EvalError::DimensionMismatch { .. })
        ));
    }
}
