//! Daily chemotherapy appointment scheduling under uncertain infusion
//! durations.
//!
//! The crate models the day as a two-stage stochastic MILP: patient
//! sequence, appointment times and nurse/chair assignments are fixed first;
//! waits and nurse overtimes follow from the realised durations. It ships
//! an extensive-form builder over a pluggable MILP backend, a closed-form
//! second-stage evaluator, four scenario-grouping decomposition heuristics
//! and the analyses built on them (baseline schedules, value of the
//! stochastic solution, parameter sweeps).

pub mod analysis;
pub mod evaluator;
pub mod instance;
pub mod io;
pub mod method;
pub mod milp;
pub mod report;
pub mod sampler;
mod seeded;
pub mod sgbd;
pub mod solution;

pub use evaluator::{evaluate_expected, evaluate_scenario, EvalError, Evaluator, PrecedenceDag};
pub use instance::{validate_instance, Instance, PatientSpec, Violation};
pub use method::{solve_with_method, Method, MethodError, SolverConfig};
pub use report::{Candidate, SolveReport, SolveStatus};
pub use sampler::{default_type_table, paper_instance_types, sample_instance, BaseParameters, SamplerSpec, TypeSource};
pub use sgbd::GroupingPlan;
pub use solution::{validate_first_stage, FirstStageSolution, ScenarioOutcome};
