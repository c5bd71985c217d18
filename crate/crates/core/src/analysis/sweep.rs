use std::fmt::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::AnalysisError;
use crate::instance::Instance;
use crate::method::{solve_with_method, Method, SolverConfig};
use crate::report::SolveStatus;
use crate::sampler::{sample_instance, BaseParameters, SamplerSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SweepParameter {
    #[serde(rename = "J")]
    FlexibilityLimit,
    #[serde(rename = "lambda")]
    Lambda,
    #[serde(rename = "nurses")]
    Nurses,
    #[serde(rename = "chairs")]
    Chairs,
}

impl SweepParameter {
    pub fn name(self) -> &'static str {
        match self {
            SweepParameter::FlexibilityLimit => "J",
            SweepParameter::Lambda => "lambda",
            SweepParameter::Nurses => "nurses",
            SweepParameter::Chairs => "chairs",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "J" | "j" => Some(SweepParameter::FlexibilityLimit),
            "lambda" => Some(SweepParameter::Lambda),
            "nurses" => Some(SweepParameter::Nurses),
            "chairs" => Some(SweepParameter::Chairs),
            _ => None,
        }
    }

    fn check(self, v: f64) -> Result<(), String> {
        let count = v.fract() == 0.0 && v >= 0.0;
        let ok = match self {
            SweepParameter::FlexibilityLimit => count,
            SweepParameter::Lambda => (0.0..=1.0).contains(&v),
            SweepParameter::Nurses | SweepParameter::Chairs => count && v >= 1.0,
        };
        if ok {
            Ok(())
        } else {
            Err(format!("{} = {v} is outside its domain", self.name()))
        }
    }

    /// `inst` with the parameter set to `v`. Changing the nurse count
    /// resets eligibility to all nurses and primaries to `i mod |N|`.
    pub fn apply(self, inst: &Instance, v: f64) -> Instance {
        match self {
            SweepParameter::FlexibilityLimit => inst.with_flexibility_limit(v as usize),
            SweepParameter::Lambda => inst.with_lambda(v),
            SweepParameter::Nurses => inst.with_nurse_count(v as usize),
            SweepParameter::Chairs => inst.with_chair_count(v as usize),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub parameter: SweepParameter,
    pub values: Vec<f64>,
    pub method: Method,
    /// Grouping seed for the decomposition methods.
    #[serde(default)]
    pub method_seed: u64,
    /// Template for the sampled instances; its seed is replaced by each of
    /// `instance_seeds`.
    pub sampler: SamplerSpec,
    #[serde(default)]
    pub base: BaseParameters,
    pub instance_seeds: Vec<u64>,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<(), AnalysisError> {
        if self.values.is_empty() {
            return Err(AnalysisError::Spec("no parameter values".into()));
        }
        if self.instance_seeds.is_empty() {
            return Err(AnalysisError::Spec("no instance seeds".into()));
        }
        for &v in &self.values {
            self.parameter.check(v).map_err(AnalysisError::Spec)?;
        }
        Ok(())
    }

    pub fn instances(&self) -> Result<Vec<Instance>, AnalysisError> {
        self.instance_seeds
            .iter()
            .map(|&seed| {
                let spec = SamplerSpec {
                    rng_seed: seed,
                    ..self.sampler.clone()
                };
                Ok(sample_instance(&spec, &self.base)?)
            })
            .collect()
    }
}

/// One solve of the sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepCell {
    pub value: f64,
    pub instance: usize,
    pub status: SolveStatus,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub objective: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected_wait: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected_overtime: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// Averages over the instances solved at one parameter value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub value: f64,
    pub solved: usize,
    pub failed: usize,
    pub mean_objective: Option<f64>,
    pub mean_wait: Option<f64>,
    pub mean_overtime: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepTable {
    pub parameter: SweepParameter,
    pub rows: Vec<SweepRow>,
    pub cells: Vec<SweepCell>,
}

impl SweepTable {
    pub fn to_csv(&self) -> String {
        let opt = |x: Option<f64>| x.map(|v| v.to_string()).unwrap_or_default();
        let mut out = format!("{},solved,failed,mean_objective,mean_wait,mean_overtime\n", self.parameter.name());
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                r.value,
                r.solved,
                r.failed,
                opt(r.mean_objective),
                opt(r.mean_wait),
                opt(r.mean_overtime)
            );
        }
        out
    }
}

/// Samples the instances of `spec` and sweeps them.
pub fn run_sweep(spec: &SweepSpec, cfg: &SolverConfig) -> Result<SweepTable, AnalysisError> {
    spec.validate()?;
    let instances = spec.instances()?;
    sweep_instances(spec.parameter, &spec.values, spec.method, spec.method_seed, &instances, cfg)
}

/// Re-solves every instance at every parameter value. A failed solve is
/// recorded in its cell and left out of the row means.
pub fn sweep_instances(
    parameter: SweepParameter,
    values: &[f64],
    method: Method,
    method_seed: u64,
    instances: &[Instance],
    cfg: &SolverConfig,
) -> Result<SweepTable, AnalysisError> {
    if instances.is_empty() {
        return Err(AnalysisError::Spec("no instances".into()));
    }
    for &v in values {
        parameter.check(v).map_err(AnalysisError::Spec)?;
    }
    let jobs: Vec<(f64, usize)> = values
        .iter()
        .flat_map(|&v| (0..instances.len()).map(move |k| (v, k)))
        .collect();
    let run = |&(value, k): &(f64, usize)| {
        let inst = parameter.apply(&instances[k], value);
        match solve_with_method(&inst, method, cfg, method_seed) {
            Ok(out) => SweepCell {
                value,
                instance: k,
                status: out.report.status,
                objective: Some(out.report.objective),
                expected_wait: Some(out.report.expected_wait),
                expected_overtime: Some(out.report.expected_overtime),
                error: None,
            },
            Err(e) => {
                log::warn!("{} = {value}, instance {k}: {e}", parameter.name());
                SweepCell {
                    value,
                    instance: k,
                    status: if e.is_infeasible() {
                        SolveStatus::Infeasible
                    } else if e.is_timeout() {
                        SolveStatus::TimeLimit
                    } else {
                        SolveStatus::Error
                    },
                    objective: None,
                    expected_wait: None,
                    expected_overtime: None,
                    error: Some(e.to_string()),
                }
            }
        }
    };
    let cells: Vec<SweepCell> = if cfg.parallel {
        jobs.par_iter().map(run).collect()
    } else {
        jobs.iter().map(run).collect()
    };

    let rows = cells
        .chunks(instances.len())
        .map(|chunk| {
            let ok: Vec<&SweepCell> = chunk.iter().filter(|c| c.objective.is_some()).collect();
            let mean = |f: fn(&SweepCell) -> Option<f64>| {
                (!ok.is_empty()).then(|| ok.iter().filter_map(|c| f(c)).sum::<f64>() / ok.len() as f64)
            };
            SweepRow {
                value: chunk[0].value,
                solved: ok.len(),
                failed: chunk.len() - ok.len(),
                mean_objective: mean(|c| c.objective),
                mean_wait: mean(|c| c.expected_wait),
                mean_overtime: mean(|c| c.expected_overtime),
            }
        })
        .collect();
    Ok(SweepTable { parameter, rows, cells })
}
