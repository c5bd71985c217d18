use std::fmt::Write;

use serde::{Deserialize, Serialize};

use super::AnalysisError;
use crate::instance::Instance;
use crate::method::{solve_with_method, Method, SolverConfig};

/// Stochastic objective against the mean-value schedule, both evaluated
/// over every scenario.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VssRow {
    pub z_t: f64,
    pub z_mvp: f64,
    /// `100 (z_mvp - z_t) / z_mvp`; zero when `z_mvp` is zero.
    pub vss_percent: f64,
}

/// Solves the two-stage problem with `method` and the mean-value problem
/// exactly, then compares their schedules on the full scenario set.
pub fn compute_vss(inst: &Instance, method: Method, cfg: &SolverConfig, seed: u64) -> Result<VssRow, AnalysisError> {
    let z_t = solve_with_method(inst, method, cfg, seed)?.report.objective;
    let z_mvp = solve_with_method(inst, Method::MeanValue, cfg, seed)?.report.objective;
    let vss_percent = if z_mvp.abs() < 1e-12 {
        0.0
    } else {
        100.0 * (z_mvp - z_t) / z_mvp
    };
    Ok(VssRow { z_t, z_mvp, vss_percent })
}

/// One line per instance, headed `instance,z_t,z_mvp,vss_percent`.
pub fn vss_csv(rows: &[(String, VssRow)]) -> String {
    let mut out = String::from("instance,z_t,z_mvp,vss_percent\n");
    for (name, r) in rows {
        let _ = writeln!(out, "{name},{},{},{}", r.z_t, r.z_mvp, r.vss_percent);
    }
    out
}
