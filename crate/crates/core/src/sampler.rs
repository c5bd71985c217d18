//! Instance generation: patient types, duration intervals and seeded
//! scenario sampling.
//!
//! Randomness comes from ChaCha8 (`rand_chacha::ChaCha8Rng`) seeded with
//! `seed_from_u64(seed)`. A unit draw is `(next_u64() >> 11) * 2^-53`, so
//! the same seed yields bit-identical instances on every platform. When
//! patient types are drawn from the type fractions they are drawn first
//! (one unit draw per patient, inverse CDF over the table); durations then
//! follow scenario by scenario, patient by patient, as
//! `low + (high - low) * unit`.

use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::instance::{modulo_primary_nurses, Instance, PatientSpec};
use crate::seeded::{seeded_rng, unit};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SamplerError {
    #[error("type fractions sum to {0}, expected 1")]
    FractionSum(f64),
    #[error("type {ty}: invalid interval [{low}, {high}]")]
    Interval { ty: usize, low: f64, high: f64 },
    #[error("at least one scenario is required")]
    NoScenarios,
    #[error("patient type {0} is not in the type table")]
    UnknownType(u8),
    #[error("reference instance number {0} is outside 1..=10")]
    InstanceNumber(usize),
    #[error("invalid base parameters: {0}")]
    Base(String),
}

/// Share of patients of one type and the interval its infusion durations
/// are drawn from (minutes).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PatientTypeRow {
    pub fraction: f64,
    pub low: f64,
    pub high: f64,
}

/// The four clinic patient types; row `k` describes type `k + 1`.
pub fn default_type_table() -> Vec<PatientTypeRow> {
    vec![
        PatientTypeRow { fraction: 0.2696, low: 16.0, high: 44.0 },
        PatientTypeRow { fraction: 0.0785, low: 29.0, high: 80.0 },
        PatientTypeRow { fraction: 0.3333, low: 74.0, high: 132.0 },
        PatientTypeRow { fraction: 0.3186, low: 125.0, high: 217.0 },
    ]
}

/// Patient types (1..=4) of the ten nine-patient reference instances.
const REFERENCE_TYPES: [[u8; 9]; 10] = [
    [1, 3, 1, 1, 4, 3, 2, 4, 3],
    [1, 4, 3, 3, 2, 3, 4, 4, 1],
    [3, 1, 3, 3, 3, 3, 4, 3, 4],
    [4, 1, 4, 1, 3, 1, 4, 3, 3],
    [4, 1, 4, 3, 1, 3, 3, 3, 3],
    [4, 3, 1, 3, 2, 1, 4, 3, 1],
    [1, 4, 4, 3, 1, 3, 3, 4, 1],
    [2, 3, 4, 4, 4, 3, 4, 1, 1],
    [3, 1, 2, 3, 3, 4, 1, 2, 4],
    [1, 1, 4, 3, 3, 4, 1, 3, 1],
];

/// Type vector of reference instance `instance_no` (1..=10).
pub fn paper_instance_types(instance_no: usize) -> Result<Vec<u8>, SamplerError> {
    instance_no
        .checked_sub(1)
        .and_then(|k| REFERENCE_TYPES.get(k))
        .map(|row| row.to_vec())
        .ok_or(SamplerError::InstanceNumber(instance_no))
}

/// Where patient types come from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TypeSource {
    /// One type (1-based) per patient.
    Explicit(Vec<u8>),
    /// Draw this many patient types from the table fractions.
    Drawn(usize),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SamplerSpec {
    pub type_table: Vec<PatientTypeRow>,
    pub types: TypeSource,
    pub n_scenarios: usize,
    pub rng_seed: u64,
}

impl SamplerSpec {
    pub fn new(types: TypeSource, n_scenarios: usize, rng_seed: u64) -> Self {
        Self {
            type_table: default_type_table(),
            types,
            n_scenarios,
            rng_seed,
        }
    }

    pub fn validate(&self) -> Result<(), SamplerError> {
        let sum: f64 = self.type_table.iter().map(|r| r.fraction).sum();
        if (sum - 1.0).abs() > 1e-9 || self.type_table.iter().any(|r| !(r.fraction >= 0.0)) {
            return Err(SamplerError::FractionSum(sum));
        }
        for (k, r) in self.type_table.iter().enumerate() {
            if !(r.low > 0.0 && r.low <= r.high && r.high.is_finite()) {
                return Err(SamplerError::Interval {
                    ty: k + 1,
                    low: r.low,
                    high: r.high,
                });
            }
        }
        if self.n_scenarios == 0 {
            return Err(SamplerError::NoScenarios);
        }
        if let TypeSource::Explicit(types) = &self.types {
            if let Some(&bad) = types
                .iter()
                .find(|&&t| t == 0 || usize::from(t) > self.type_table.len())
            {
                return Err(SamplerError::UnknownType(bad));
            }
        }
        Ok(())
    }
}

/// How primary nurses are chosen.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PrimaryNurseRule {
    /// Patient `i` (0-based) gets nurse `i mod |N|`.
    Modulo,
    Explicit(Vec<usize>),
}

/// Resource and cost parameters shared by every sampled instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaseParameters {
    pub nurse_count: usize,
    pub chair_count: usize,
    pub premed_duration: f64,
    pub shift_length: f64,
    /// Defaults to the shift length when absent.
    pub overtime_limit: Option<f64>,
    pub lambda: f64,
    pub flexibility_limit: usize,
    pub primary_rule: PrimaryNurseRule,
}

impl Default for BaseParameters {
    /// Two nurses, three chairs, `s = 15`, `H = 240`, `lambda = 0.3`, `J = 2`.
    fn default() -> Self {
        Self {
            nurse_count: 2,
            chair_count: 3,
            premed_duration: 15.0,
            shift_length: 240.0,
            overtime_limit: None,
            lambda: 0.3,
            flexibility_limit: 2,
            primary_rule: PrimaryNurseRule::Modulo,
        }
    }
}

fn draw_type(rng: &mut ChaCha8Rng, table: &[PatientTypeRow]) -> u8 {
    let total: f64 = table.iter().map(|r| r.fraction).sum();
    let target = unit(rng) * total;
    let mut acc = 0.0;
    for (k, r) in table.iter().enumerate() {
        acc += r.fraction;
        if target < acc {
            return (k + 1) as u8;
        }
    }
    table.len() as u8
}

/// Draws an instance: uniform continuous durations from each patient's
/// type interval, scenario-major.
pub fn sample_instance(spec: &SamplerSpec, base: &BaseParameters) -> Result<Instance, SamplerError> {
    spec.validate()?;
    if base.nurse_count == 0 || base.chair_count == 0 {
        return Err(SamplerError::Base("need at least one nurse and one chair".into()));
    }
    let mut rng = seeded_rng(spec.rng_seed);

    let types = match &spec.types {
        TypeSource::Explicit(types) => types.clone(),
        TypeSource::Drawn(n) => (0..*n).map(|_| draw_type(&mut rng, &spec.type_table)).collect(),
    };
    let n_patients = types.len();

    let scenarios: Vec<Vec<f64>> = (0..spec.n_scenarios)
        .map(|_| {
            types
                .iter()
                .map(|&ty| {
                    let row = spec.type_table[usize::from(ty) - 1];
                    row.low + (row.high - row.low) * unit(&mut rng)
                })
                .collect()
        })
        .collect();

    let primary_nurse = match &base.primary_rule {
        PrimaryNurseRule::Modulo => modulo_primary_nurses(n_patients, base.nurse_count),
        PrimaryNurseRule::Explicit(p) => {
            if p.len() != n_patients || p.iter().any(|&n| n >= base.nurse_count) {
                return Err(SamplerError::Base("explicit primary nurses do not fit".into()));
            }
            p.clone()
        }
    };

    let mut inst = Instance {
        patients: types
            .iter()
            .enumerate()
            .map(|(index, &ty)| PatientSpec {
                index,
                patient_type: Some(ty),
            })
            .collect(),
        nurse_count: base.nurse_count,
        eligible_nurses: vec![(0..base.nurse_count).collect(); n_patients],
        primary_nurse,
        chair_count: base.chair_count,
        premed_duration: base.premed_duration,
        shift_length: base.shift_length,
        overtime_limit: base.overtime_limit.unwrap_or(base.shift_length),
        lambda: base.lambda,
        flexibility_limit: base.flexibility_limit,
        scenarios,
        big_m: 0.0,
    };
    inst.big_m = inst.safe_big_m();
    Ok(inst)
}

/// Midpoint of each patient's type interval, the expected infusion
/// duration under uniform sampling. Falls back to the scenario mean for
/// patients without a type.
pub fn expected_durations(inst: &Instance, table: &[PatientTypeRow]) -> Vec<f64> {
    let sample_mean = inst.mean_durations();
    inst.patients
        .iter()
        .zip(sample_mean)
        .map(|(p, mean)| match p.patient_type.and_then(|t| table.get(usize::from(t).wrapping_sub(1))) {
            Some(row) => 0.5 * (row.low + row.high),
            None => mean,
        })
        .collect()
}
