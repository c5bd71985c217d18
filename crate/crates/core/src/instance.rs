//! Problem instances: patients, staff, chairs, cost parameters and the
//! scenario matrix of infusion durations.

use std::fmt;

use serde::{Deserialize, Serialize};

/// A patient in the daily list. `patient_type` is 1..=4 for sampled
/// instances and absent for hand-built ones.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatientSpec {
    pub index: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub patient_type: Option<u8>,
}

/// One broken rule found by a validator.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub field: String,
    pub rule: String,
    pub detail: String,
}

impl Violation {
    pub fn new(field: impl Into<String>, rule: impl Into<String>, detail: impl Into<String>) -> Self {
        Self {
            field: field.into(),
            rule: rule.into(),
            detail: detail.into(),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [{}]: {}", self.field, self.rule, self.detail)
    }
}

/// A daily scheduling instance.
///
/// All times are minutes. `scenarios[w][i]` is the infusion duration of
/// patient `i` in scenario `w`; every scenario has probability
/// `1 / scenarios.len()`.
///
/// On read, `eligible_nurses` defaults to every nurse, `primary_nurse` to
/// `i mod nurse_count`, `overtime_limit` to `shift_length`, and `big_m` to
/// [`Instance::safe_big_m`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(from = "InstanceDoc")]
pub struct Instance {
    pub patients: Vec<PatientSpec>,
    pub nurse_count: usize,
    pub eligible_nurses: Vec<Vec<usize>>,
    pub primary_nurse: Vec<usize>,
    pub chair_count: usize,
    pub premed_duration: f64,
    pub shift_length: f64,
    pub overtime_limit: f64,
    pub lambda: f64,
    pub flexibility_limit: usize,
    pub scenarios: Vec<Vec<f64>>,
    pub big_m: f64,
}

#[derive(Deserialize)]
struct InstanceDoc {
    patients: Vec<PatientSpec>,
    nurse_count: usize,
    #[serde(default)]
    eligible_nurses: Option<Vec<Vec<usize>>>,
    #[serde(default)]
    primary_nurse: Option<Vec<usize>>,
    chair_count: usize,
    premed_duration: f64,
    shift_length: f64,
    #[serde(default)]
    overtime_limit: Option<f64>,
    lambda: f64,
    flexibility_limit: usize,
    scenarios: Vec<Vec<f64>>,
    #[serde(default)]
    big_m: Option<f64>,
}

impl From<InstanceDoc> for Instance {
    fn from(doc: InstanceDoc) -> Self {
        let n_patients = doc.patients.len();
        let nurse_count = doc.nurse_count;
        let mut inst = Instance {
            eligible_nurses: doc
                .eligible_nurses
                .unwrap_or_else(|| vec![(0..nurse_count).collect(); n_patients]),
            primary_nurse: doc
                .primary_nurse
                .unwrap_or_else(|| modulo_primary_nurses(n_patients, nurse_count)),
            patients: doc.patients,
            nurse_count,
            chair_count: doc.chair_count,
            premed_duration: doc.premed_duration,
            shift_length: doc.shift_length,
            overtime_limit: doc.overtime_limit.unwrap_or(doc.shift_length),
            lambda: doc.lambda,
            flexibility_limit: doc.flexibility_limit,
            scenarios: doc.scenarios,
            big_m: 0.0,
        };
        inst.big_m = doc.big_m.unwrap_or_else(|| inst.safe_big_m());
        inst
    }
}

/// Primary nurse of patient `i` is `i mod nurse_count`.
pub fn modulo_primary_nurses(n_patients: usize, nurse_count: usize) -> Vec<usize> {
    if nurse_count == 0 {
        return vec![0; n_patients];
    }
    (0..n_patients).map(|i| i % nurse_count).collect()
}

impl Instance {
    /// Builds an instance with skill-homogeneous staff, the modulo
    /// primary-nurse rule, `L = H` and the safe big-M.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        nurse_count: usize,
        chair_count: usize,
        premed_duration: f64,
        shift_length: f64,
        lambda: f64,
        flexibility_limit: usize,
        scenarios: Vec<Vec<f64>>,
    ) -> Self {
        let n_patients = scenarios.first().map_or(0, Vec::len);
        let mut inst = Instance {
            patients: (0..n_patients)
                .map(|index| PatientSpec {
                    index,
                    patient_type: None,
                })
                .collect(),
            nurse_count,
            eligible_nurses: vec![(0..nurse_count).collect(); n_patients],
            primary_nurse: modulo_primary_nurses(n_patients, nurse_count),
            chair_count,
            premed_duration,
            shift_length,
            overtime_limit: shift_length,
            lambda,
            flexibility_limit,
            scenarios,
            big_m: 0.0,
        };
        inst.big_m = inst.safe_big_m();
        inst
    }

    pub fn n_patients(&self) -> usize {
        self.patients.len()
    }

    pub fn n_scenarios(&self) -> usize {
        self.scenarios.len()
    }

    /// `H + L + max_w sum_i (s + t[w][i])`, large enough to switch off any
    /// relaxed disjunctive row.
    pub fn safe_big_m(&self) -> f64 {
        let worst_day = self
            .scenarios
            .iter()
            .map(|row| row.iter().map(|t| self.premed_duration + t).sum::<f64>())
            .fold(0.0_f64, f64::max);
        self.shift_length + self.overtime_limit + worst_day
    }

    /// Mean infusion duration of every patient over all scenarios.
    pub fn mean_durations(&self) -> Vec<f64> {
        let n = self.n_scenarios() as f64;
        let mut mean = vec![0.0; self.n_patients()];
        for row in &self.scenarios {
            for (m, t) in mean.iter_mut().zip(row) {
                *m += t;
            }
        }
        mean.iter_mut().for_each(|m| *m /= n);
        mean
    }

    /// Copy restricted to the given scenarios, in the given order.
    pub fn restricted_to(&self, scenario_subset: &[usize]) -> Instance {
        Instance {
            scenarios: scenario_subset
                .iter()
                .map(|&w| self.scenarios[w].clone())
                .collect(),
            ..self.clone()
        }
    }

    /// Replaces the staff with `nurse_count` interchangeable nurses and
    /// re-derives primary nurses by the modulo rule.
    pub fn with_nurse_count(&self, nurse_count: usize) -> Instance {
        let n = self.n_patients();
        Instance {
            nurse_count,
            eligible_nurses: vec![(0..nurse_count).collect(); n],
            primary_nurse: modulo_primary_nurses(n, nurse_count),
            ..self.clone()
        }
    }

    pub fn with_chair_count(&self, chair_count: usize) -> Instance {
        Instance {
            chair_count,
            ..self.clone()
        }
    }

    pub fn with_lambda(&self, lambda: f64) -> Instance {
        Instance {
            lambda,
            ..self.clone()
        }
    }

    pub fn with_flexibility_limit(&self, flexibility_limit: usize) -> Instance {
        Instance {
            flexibility_limit,
            ..self.clone()
        }
    }

    /// Is nurse `n` allowed for patient `i`?
    pub fn is_eligible(&self, i: usize, n: usize) -> bool {
        self.eligible_nurses[i].contains(&n)
    }
}

/// Checks every instance invariant and returns one entry per broken rule.
pub fn validate_instance(inst: &Instance) -> Vec<Violation> {
    let mut out = Vec::new();
    let n_patients = inst.n_patients();

    for (pos, p) in inst.patients.iter().enumerate() {
        if p.index != pos {
            out.push(Violation::new(
                "patients",
                "index",
                format!("patient at position {pos} has index {}", p.index),
            ));
        }
        if let Some(ty) = p.patient_type {
            if !(1..=4).contains(&ty) {
                out.push(Violation::new(
                    "patients",
                    "patient_type",
                    format!("patient {pos} has type {ty}, expected 1..=4"),
                ));
            }
        }
    }

    if inst.nurse_count == 0 {
        out.push(Violation::new("nurse_count", "positive", "at least one nurse is required"));
    }
    if inst.chair_count == 0 {
        out.push(Violation::new("chair_count", "positive", "at least one chair is required"));
    }

    if inst.eligible_nurses.len() != n_patients {
        out.push(Violation::new(
            "eligible_nurses",
            "dimension",
            format!("{} sets for {n_patients} patients", inst.eligible_nurses.len()),
        ));
    } else {
        for (i, set) in inst.eligible_nurses.iter().enumerate() {
            if set.is_empty() {
                out.push(Violation::new(
                    "eligible_nurses",
                    "non-empty",
                    format!("patient {i} has no eligible nurse"),
                ));
            }
            if let Some(&n) = set.iter().find(|&&n| n >= inst.nurse_count) {
                out.push(Violation::new(
                    "eligible_nurses",
                    "range",
                    format!("patient {i} lists nurse {n} but only {} exist", inst.nurse_count),
                ));
            }
            let mut sorted = set.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != set.len() {
                out.push(Violation::new(
                    "eligible_nurses",
                    "unique",
                    format!("patient {i} lists a nurse twice"),
                ));
            }
        }
    }

    if inst.primary_nurse.len() != n_patients {
        out.push(Violation::new(
            "primary_nurse",
            "dimension",
            format!("{} entries for {n_patients} patients", inst.primary_nurse.len()),
        ));
    } else if inst.eligible_nurses.len() == n_patients {
        for (i, &n) in inst.primary_nurse.iter().enumerate() {
            if !inst.eligible_nurses[i].contains(&n) {
                out.push(Violation::new(
                    "primary_nurse",
                    "member of eligible set",
                    format!("patient {i}: primary nurse {n} is not in its eligible set"),
                ));
            }
        }
    }

    if !(inst.premed_duration >= 0.0 && inst.premed_duration.is_finite()) {
        out.push(Violation::new("premed_duration", "s >= 0", format!("got {}", inst.premed_duration)));
    }
    if !(inst.shift_length > 0.0 && inst.shift_length.is_finite()) {
        out.push(Violation::new("shift_length", "H > 0", format!("got {}", inst.shift_length)));
    }
    if !(inst.overtime_limit >= 0.0 && inst.overtime_limit.is_finite()) {
        out.push(Violation::new("overtime_limit", "L >= 0", format!("got {}", inst.overtime_limit)));
    }
    if !(0.0..=1.0).contains(&inst.lambda) {
        out.push(Violation::new("lambda", "0 <= lambda <= 1", format!("got {}", inst.lambda)));
    }

    if inst.scenarios.is_empty() {
        out.push(Violation::new("scenarios", "non-empty", "at least one scenario is required"));
    }
    for (w, row) in inst.scenarios.iter().enumerate() {
        if row.len() != n_patients {
            out.push(Violation::new(
                "scenarios",
                "rectangular",
                format!("scenario {w} has {} durations for {n_patients} patients", row.len()),
            ));
        }
        if let Some((i, t)) = row.iter().enumerate().find(|(_, t)| !(**t > 0.0 && t.is_finite())) {
            out.push(Violation::new(
                "scenarios",
                "t > 0",
                format!("scenario {w}, patient {i}: duration {t}"),
            ));
        }
    }

    let required = inst.safe_big_m();
    if !(inst.big_m >= required) {
        out.push(Violation::new(
            "big_m",
            "M >= H + L + max day length",
            format!("got {}, need at least {required}", inst.big_m),
        ));
    }

    out
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn baseline_like() -> Instance {
        let row = vec![39.0, 117.0, 23.0, 38.0, 73.0, 161.0, 25.0, 185.0, 31.0];
        Instance::new(2, 3, 15.0, 240.0, 0.3, 2, vec![row])
    }

    #[test]
    fn baseline_instance_is_valid() {
        assert!(validate_instance(&baseline_like()).is_empty());
    }

    #[test]
    fn lambda_out_of_range_is_reported() {
        let mut inst = baseline_like();
        inst.lambda = 1.3;
        let v = validate_instance(&inst);
        assert_eq!(v.len(), 1, "{v:?}");
        assert_eq!(v[0].field, "lambda");
    }

    #[test]
    fn primary_outside_eligible_set_names_the_patient() {
        let mut inst = baseline_like();
        inst.eligible_nurses[2] = vec![1];
        inst.primary_nurse[2] = 0;
        let v = validate_instance(&inst);
        assert_eq!(v.len(), 1, "{v:?}");
        assert_eq!(v[0].field, "primary_nurse");
        assert!(v[0].detail.contains("patient 2"));
    }

    #[test]
    fn ragged_scenarios_and_small_big_m() {
        let mut inst = baseline_like();
        inst.scenarios.push(vec![10.0; 8]);
        inst.big_m = 10.0;
        let fields: Vec<_> = validate_instance(&inst).into_iter().map(|v| v.field).collect();
        assert!(fields.contains(&"scenarios".to_string()));
        assert!(fields.contains(&"big_m".to_string()));
    }

    #[test]
    fn defaults_are_filled_on_read() {
        let json = r#"{
            "patients": [{"index": 0}, {"index": 1}, {"index": 2}],
            "nurse_count": 2, "chair_count": 1,
            "premed_duration": 15, "shift_length": 240, "lambda": 0.5,
            "flexibility_limit": 0,
            "scenarios": [[10, 20, 30]]
        }"#;
        let inst: Instance = serde_json::from_str(json).unwrap();
        assert_eq!(inst.primary_nurse, vec![0, 1, 0]);
        assert_eq!(inst.eligible_nurses, vec![vec![0, 1]; 3]);
        assert_eq!(inst.overtime_limit, 240.0);
        assert_eq!(inst.big_m, 240.0 + 240.0 + 105.0);
        assert!(validate_instance(&inst).is_empty());
    }

    #[test]
    fn mean_and_restriction() {
        let inst = Instance::new(1, 1, 0.0, 240.0, 0.5, 0, vec![vec![100.0], vec![140.0]]);
        assert_eq!(inst.mean_durations(), vec![120.0]);
        assert_eq!(inst.restricted_to(&[1]).scenarios, vec![vec![140.0]]);
    }
}
