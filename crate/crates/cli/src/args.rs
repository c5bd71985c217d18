use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(name = "chemosched", version, about = "Chemotherapy appointment scheduling under uncertain infusion times")]
pub struct Cli {
    /// JSON file of flag values for the subcommand (keys are long flag
    /// names); flags on the command line take precedence.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    /// Worker threads [default: available processors].
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Log progress to stderr (repeat for more detail).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Draw seeded instances.
    Sample(SampleArgs),
    /// Solve an instance with one method.
    Solve(SolveArgs),
    /// Evaluate a given schedule over every scenario of an instance.
    Evaluate(EvaluateArgs),
    /// Value of the stochastic solution per instance.
    Vss(VssArgs),
    /// Re-solve instances over a range of one parameter.
    Sweep(SweepArgs),
}

/// Resource and cost parameters of sampled instances.
#[derive(Debug, Clone, Args, Serialize)]
pub struct BaseArgs {
    #[arg(long, default_value_t = 2)]
    pub nurses: usize,
    #[arg(long, default_value_t = 3)]
    pub chairs: usize,
    /// Premedication duration s (minutes).
    #[arg(long, default_value_t = 15.0)]
    pub premed: f64,
    /// Shift length H (minutes).
    #[arg(long, default_value_t = 240.0)]
    pub shift: f64,
    /// Overtime limit L (minutes) [default: the shift length].
    #[arg(long)]
    pub overtime_limit: Option<f64>,
    /// Weight of waiting time against overtime.
    #[arg(long, default_value_t = 0.3)]
    pub lambda: f64,
    /// Maximum number of patients assigned away from their primary nurse.
    #[arg(long, default_value_t = 2)]
    pub flex: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct SampleArgs {
    /// The ten reference instances (nine patients each).
    #[arg(long, conflicts_with_all = ["patients", "types"])]
    pub paper_set: bool,
    /// Number of patients, types drawn from the type table.
    #[arg(long, conflicts_with = "types")]
    pub patients: Option<usize>,
    /// Explicit patient types (1-4), comma separated.
    #[arg(long, value_delimiter = ',')]
    pub types: Option<Vec<u8>>,
    #[arg(long, default_value_t = 48)]
    pub scenarios: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Number of instances; instance k uses seed + k - 1.
    #[arg(long, default_value_t = 1)]
    pub count: usize,
    #[command(flatten)]
    pub base: BaseArgs,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MethodArg {
    Exact,
    #[value(name = "p-sgbd")]
    PSgbd,
    #[value(name = "f-sgbd")]
    FSgbd,
    #[value(name = "c-sgbd")]
    CSgbd,
    #[value(name = "r-sgbd")]
    RSgbd,
    Baseline,
    Mvp,
}

/// Method choice plus solver limits, shared by solve, vss and sweep.
#[derive(Debug, Clone, Args, Serialize)]
pub struct SolverArgs {
    /// Target group size Z of the static decompositions.
    #[arg(long, default_value_t = 8)]
    pub group_size: usize,
    /// Merge factor of the progressive decomposition.
    #[arg(long, default_value_t = 2)]
    pub alpha: usize,
    /// Iterations of the progressive decomposition.
    #[arg(long, default_value_t = 4)]
    pub iterations: usize,
    /// Seed of the scenario grouping.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Seed passed to the MILP backend.
    #[arg(long, default_value_t = 0)]
    pub solver_seed: u64,
    /// Wall-clock limit in seconds for the whole solve.
    #[arg(long)]
    pub time_limit: Option<f64>,
    /// Relative optimality gap at which a MILP solve stops.
    #[arg(long, default_value_t = 0.0)]
    pub gap: f64,
    /// Restrict appointment times to whole minutes.
    #[arg(long)]
    pub integer_appointments: bool,
    /// Leave out the chair symmetry-breaking rows.
    #[arg(long)]
    pub no_symmetry_breaking: bool,
    /// Solve group subproblems one at a time.
    #[arg(long)]
    pub sequential: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct SolveArgs {
    #[arg(long)]
    pub instance: PathBuf,
    #[arg(long, value_enum, default_value = "f-sgbd")]
    pub method: MethodArg,
    #[command(flatten)]
    pub solver: SolverArgs,
    /// Exact objective to report the gap against: a number or a report file.
    #[arg(long)]
    pub exact_reference: Option<String>,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Debug, Args, Serialize)]
pub struct EvaluateArgs {
    #[arg(long)]
    pub instance: PathBuf,
    #[arg(long)]
    pub solution: PathBuf,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Debug, Args, Serialize)]
pub struct VssArgs {
    /// Instance files, comma separated or repeated.
    #[arg(long, required = true, value_delimiter = ',')]
    pub instance: Vec<PathBuf>,
    /// Method for the stochastic problem.
    #[arg(long, value_enum, default_value = "exact")]
    pub method: MethodArg,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Debug, Args, Serialize)]
pub struct SweepArgs {
    /// J, lambda, nurses or chairs.
    #[arg(long)]
    pub param: String,
    #[arg(long, required = true, value_delimiter = ',')]
    pub values: Vec<f64>,
    /// Instance files; without them instances are sampled.
    #[arg(long, value_delimiter = ',')]
    pub instance: Vec<PathBuf>,
    /// Patients per sampled instance.
    #[arg(long, default_value_t = 6)]
    pub patients: usize,
    /// Scenarios per sampled instance.
    #[arg(long, default_value_t = 8)]
    pub scenarios: usize,
    /// Seeds of the sampled instances.
    #[arg(long, value_delimiter = ',', default_value = "1")]
    pub instance_seeds: Vec<u64>,
    #[command(flatten)]
    pub base: BaseArgs,
    #[arg(long, value_enum, default_value = "exact")]
    pub method: MethodArg,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}
