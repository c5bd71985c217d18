//! Fixtures shared by the benchmarks.

use chemosched::analysis::baseline_schedule;
use chemosched::{sample_instance, BaseParameters, FirstStageSolution, Instance, SamplerSpec, TypeSource};

/// A sampled day with `patients` drawn patients and its baseline schedule.
pub fn fixture(patients: usize, scenarios: usize, seed: u64) -> (Instance, FirstStageSolution) {
    let spec = SamplerSpec::new(TypeSource::Drawn(patients), scenarios, seed);
    let inst = sample_instance(&spec, &BaseParameters::default()).expect("default sampler spec is valid");
    let sol = baseline_schedule(&inst);
    (inst, sol)
}
