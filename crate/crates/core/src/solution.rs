//! First-stage decisions and their validation, plus per-scenario outcomes.

use serde::{Deserialize, Serialize};

use crate::evaluator::PrecedenceDag;
use crate::instance::{Instance, Violation};

/// Slack allowed on `u_ij = 1 => a_j >= a_i`, absorbing solver round-off.
pub const ORDER_TOLERANCE: f64 = 1e-6;

/// Sequence, appointment times and resource assignments, fixed before the
/// infusion durations are revealed.
///
/// `precedence[i][j]` is `u_ij`; the diagonal is unused and kept `false`.
/// Nurse and chair assignments are index maps rather than one-hot rows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FirstStageSolution {
    pub precedence: Vec<Vec<bool>>,
    pub appointments: Vec<f64>,
    pub nurse: Vec<usize>,
    pub chair: Vec<usize>,
}

impl FirstStageSolution {
    /// Builds the tournament of a total order: `order[k]` precedes
    /// `order[k + 1..]`.
    pub fn from_sequence(order: &[usize], appointments: Vec<f64>, nurse: Vec<usize>, chair: Vec<usize>) -> Self {
        let n = order.len();
        let mut precedence = vec![vec![false; n]; n];
        for (k, &i) in order.iter().enumerate() {
            for &j in &order[k + 1..] {
                precedence[i][j] = true;
            }
        }
        Self {
            precedence,
            appointments,
            nurse,
            chair,
        }
    }

    /// Total order by appointment time, ties by patient index.
    pub fn from_appointments(appointments: Vec<f64>, nurse: Vec<usize>, chair: Vec<usize>) -> Self {
        let mut order: Vec<usize> = (0..appointments.len()).collect();
        order.sort_by(|&i, &j| appointments[i].total_cmp(&appointments[j]).then(i.cmp(&j)));
        Self::from_sequence(&order, appointments, nurse, chair)
    }

    pub fn n_patients(&self) -> usize {
        self.appointments.len()
    }

    /// The patient order if `precedence` is transitive, `None` otherwise.
    pub fn sequence(&self) -> Option<Vec<usize>> {
        let n = self.n_patients();
        let wins: Vec<usize> = (0..n)
            .map(|i| (0..n).filter(|&j| j != i && self.precedence[i][j]).count())
            .collect();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&i| std::cmp::Reverse(wins[i]));
        let transitive = order
            .iter()
            .enumerate()
            .all(|(k, &i)| order[k + 1..].iter().all(|&j| self.precedence[i][j]));
        transitive.then_some(order)
    }

    /// Number of patients not served by their primary nurse.
    pub fn alternative_assignments(&self, inst: &Instance) -> usize {
        self.nurse
            .iter()
            .zip(&inst.primary_nurse)
            .filter(|(n, p)| n != p)
            .count()
    }
}

/// Checks the first-stage rules against `inst`: tournament, order
/// consistency, assignment domains, the flexibility budget and acyclicity
/// of the resource precedence graph.
pub fn validate_first_stage(inst: &Instance, sol: &FirstStageSolution) -> Vec<Violation> {
    let n = inst.n_patients();
    let mut out = Vec::new();

    let dims_ok = sol.appointments.len() == n
        && sol.nurse.len() == n
        && sol.chair.len() == n
        && sol.precedence.len() == n
        && sol.precedence.iter().all(|row| row.len() == n);
    if !dims_ok {
        out.push(Violation::new(
            "solution",
            "dimension",
            format!("solution does not match an instance with {n} patients"),
        ));
        return out;
    }

    for i in 0..n {
        for j in (i + 1)..n {
            let (ij, ji) = (sol.precedence[i][j], sol.precedence[j][i]);
            if ij == ji {
                out.push(Violation::new(
                    "precedence",
                    "tournament",
                    format!("u[{i}][{j}] + u[{j}][{i}] = {}", ij as u8 + ji as u8),
                ));
            }
        }
    }

    for i in 0..n {
        for j in 0..n {
            if i != j && sol.precedence[i][j] && sol.appointments[j] < sol.appointments[i] - ORDER_TOLERANCE {
                out.push(Violation::new(
                    "appointments",
                    "order consistency",
                    format!(
                        "patient {i} precedes {j} but a[{j}] = {} < a[{i}] = {}",
                        sol.appointments[j], sol.appointments[i]
                    ),
                ));
            }
        }
    }

    for (i, &a) in sol.appointments.iter().enumerate() {
        if !(a >= -ORDER_TOLERANCE && a.is_finite()) {
            out.push(Violation::new("appointments", "a >= 0", format!("a[{i}] = {a}")));
        }
    }

    let mut domains_ok = true;
    for i in 0..n {
        if !inst.eligible_nurses.get(i).is_some_and(|set| set.contains(&sol.nurse[i])) {
            domains_ok = false;
            out.push(Violation::new(
                "nurse",
                "eligible",
                format!("patient {i} assigned to nurse {} outside its eligible set", sol.nurse[i]),
            ));
        }
        if sol.chair[i] >= inst.chair_count {
            domains_ok = false;
            out.push(Violation::new(
                "chair",
                "range",
                format!("patient {i} assigned to chair {} of {}", sol.chair[i], inst.chair_count),
            ));
        }
    }

    let alternatives = sol.alternative_assignments(inst);
    if alternatives > inst.flexibility_limit {
        out.push(Violation::new(
            "nurse",
            "flexibility",
            format!(
                "{alternatives} patients on alternative nurses, limit is {}",
                inst.flexibility_limit
            ),
        ));
    }

    if domains_ok {
        if let Err(cycle) = PrecedenceDag::topological_order(sol) {
            out.push(Violation::new(
                "precedence",
                "acyclic on shared resources",
                format!("patients {cycle:?} form a cycle on shared nurses/chairs"),
            ));
        }
    }

    out
}

/// Waits and overtimes realised in one scenario.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioOutcome {
    pub waits: Vec<f64>,
    pub overtimes: Vec<f64>,
    /// `lambda * sum(waits) + (1 - lambda) * sum(overtimes)`.
    pub cost: f64,
    /// Some overtime exceeds the limit `L`.
    pub exceeds_overtime_limit: bool,
}

impl ScenarioOutcome {
    pub fn total_wait(&self) -> f64 {
        self.waits.iter().sum()
    }

    pub fn total_overtime(&self) -> f64 {
        self.overtimes.iter().sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_nurse_instance(j: usize) -> Instance {
        Instance::new(2, 2, 15.0, 240.0, 0.5, j, vec![vec![30.0, 40.0, 50.0]])
    }

    #[test]
    fn from_sequence_is_a_tournament() {
        let sol = FirstStageSolution::from_sequence(&[2, 0, 1], vec![10.0, 20.0, 0.0], vec![0, 1, 0], vec![0, 1, 0]);
        assert!(sol.precedence[2][0] && sol.precedence[2][1] && sol.precedence[0][1]);
        assert_eq!(sol.sequence(), Some(vec![2, 0, 1]));
        assert!(validate_first_stage(&two_nurse_instance(0), &sol).is_empty());
    }

    #[test]
    fn double_precedence_breaks_tournament() {
        let mut sol = FirstStageSolution::from_appointments(vec![0.0, 10.0, 20.0], vec![0, 1, 0], vec![0, 1, 0]);
        sol.precedence[1][0] = true;
        let v = validate_first_stage(&two_nurse_instance(0), &sol);
        assert!(v.iter().any(|v| v.rule == "tournament"), "{v:?}");
    }

    #[test]
    fn zero_flexibility_rejects_alternative_nurse() {
        let sol = FirstStageSolution::from_appointments(vec![0.0, 10.0, 20.0], vec![1, 1, 0], vec![0, 1, 0]);
        let v = validate_first_stage(&two_nurse_instance(0), &sol);
        assert_eq!(v.len(), 1, "{v:?}");
        assert_eq!(v[0].rule, "flexibility");
        assert!(validate_first_stage(&two_nurse_instance(1), &sol).is_empty());
    }

    #[test]
    fn inverted_appointments_break_order() {
        let sol = FirstStageSolution::from_sequence(&[0, 1, 2], vec![50.0, 10.0, 60.0], vec![0, 1, 0], vec![0, 1, 0]);
        let v = validate_first_stage(&two_nurse_instance(0), &sol);
        assert!(v.iter().any(|v| v.rule == "order consistency"), "{v:?}");
    }

    #[test]
    fn cycle_on_shared_resources_is_rejected() {
        // 0 -> 1 -> 2 -> 0 with all three on one chair and equal appointments.
        let precedence = vec![
            vec![false, true, false],
            vec![false, false, true],
            vec![true, false, false],
        ];
        let sol = FirstStageSolution {
            precedence,
            appointments: vec![0.0; 3],
            nurse: vec![0, 1, 0],
            chair: vec![0, 0, 0],
        };
        let v = validate_first_stage(&two_nurse_instance(0), &sol);
        assert!(v.iter().any(|v| v.rule == "acyclic on shared resources"), "{v:?}");
        assert_eq!(sol.sequence(), None);
    }

    #[test]
    fn cycle_among_unrelated_patients_is_fine() {
        // Same cyclic tournament, but nobody shares a nurse or a chair.
        let inst = Instance::new(3, 3, 15.0, 240.0, 0.5, 3, vec![vec![30.0, 40.0, 50.0]]);
        let sol = FirstStageSolution {
            precedence: vec![
                vec![false, true, false],
                vec![false, false, true],
                vec![true, false, false],
            ],
            appointments: vec![0.0; 3],
            nurse: vec![0, 1, 2],
            chair: vec![0, 1, 2],
        };
        assert!(validate_first_stage(&inst, &sol).is_empty());
    }
}
