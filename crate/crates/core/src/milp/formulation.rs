//! The two-stage model in extensive form and its restrictions.
//!
//! First stage: tournament `u`, chair assignment `y`, nurse assignment
//! `x`, appointment times `a`. Second stage, one copy per scenario in the
//! subset: waits `w` and nurse overtimes `o`. The objective is the mean
//! over the subset of `lambda * sum(w) + (1 - lambda) * sum(o)`.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::backend::{SolveLimits, SolverBackend};
use super::model::{LinearModel, VarId, VarKind};
use super::MilpError;
use crate::evaluator::Evaluator;
use crate::instance::{validate_instance, Instance};
use crate::report::{SolveReport, SolveStatus};
use crate::solution::{validate_first_stage, FirstStageSolution};

const INF: f64 = f64::INFINITY;

/// Modelling switches.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct FormulationOptions {
    /// Appointment times restricted to whole minutes.
    pub integer_appointments: bool,
    /// Chairs are identical: chair `c > 0` may only be used by patient `i`
    /// if chair `c - 1` is used by some patient before `i` in index order.
    pub chair_symmetry_breaking: bool,
    /// Per-row big-M values derived from `a_i + w_i + s + t_i <= H + L`
    /// instead of the instance-wide `M`.
    pub tight_big_m: bool,
    /// `u_ij + u_jk + u_ki <= 2`. Does not change the optimum: any
    /// feasible tournament can be replaced by a linear extension with the
    /// same second stage.
    pub transitivity_cuts: bool,
    /// `a_i + w_i <= H + L - s - t_i` per scenario.
    pub start_caps: bool,
    /// Total overtime is at least the load of any chair minus `H`.
    pub chair_load_cuts: bool,
}

impl Default for FormulationOptions {
    fn default() -> Self {
        Self {
            integer_appointments: false,
            chair_symmetry_breaking: true,
            tight_big_m: true,
            transitivity_cuts: false,
            start_caps: false,
            chair_load_cuts: true,
        }
    }
}

impl FormulationOptions {
    /// The model exactly as stated: instance big-M, no added rows.
    pub fn plain() -> Self {
        Self {
            integer_appointments: false,
            chair_symmetry_breaking: false,
            tight_big_m: false,
            transitivity_cuts: false,
            start_caps: false,
            chair_load_cuts: false,
        }
    }
}

/// A model variable, keyed by its role and indices. Scenario indices refer
/// to the original instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VarKey {
    Precedence { i: usize, j: usize },
    Chair { i: usize, c: usize },
    Nurse { i: usize, n: usize },
    Appointment { i: usize },
    Wait { scenario: usize, i: usize },
    Overtime { scenario: usize, n: usize },
}

/// Constraint families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    /// `u_ij + u_ji = 1`
    Tournament,
    /// `a_j >= a_i - M (1 - u_ij)`
    Order,
    /// one chair per patient
    ChairAssignment,
    /// one eligible nurse per patient
    NurseAssignment,
    /// at most `J` alternative-nurse assignments
    Flexibility,
    /// lexicographic chair usage (optional)
    ChairSymmetry,
    /// shared nurse: `j` starts after `i`'s premedication
    NursePrecedence,
    /// shared chair: `j` starts after `i`'s treatment
    ChairPrecedence,
    /// overtime lower bound from each assigned patient's finish
    OvertimeDefinition,
    /// `o_n <= L`
    OvertimeCap,
    /// `u_ij + u_jk + u_ki <= 2` (optional)
    Transitivity,
    /// `a_i + w_i <= H + L - s - t_i` (optional)
    StartCap,
    /// total overtime covers each chair's load beyond `H` (optional)
    ChairLoad,
}

impl Family {
    /// Equation number of the family in the standard statement of the
    /// model; `None` for the optional strengthening rows.
    pub fn equation(self) -> Option<u8> {
        match self {
            Family::Tournament => Some(2),
            Family::Order => Some(3),
            Family::ChairAssignment => Some(4),
            Family::NurseAssignment => Some(5),
            Family::Flexibility => Some(6),
            Family::ChairSymmetry => None,
            Family::NursePrecedence => Some(12),
            Family::ChairPrecedence => Some(13),
            Family::OvertimeDefinition => Some(14),
            Family::OvertimeCap => Some(15),
            Family::Transitivity | Family::StartCap | Family::ChairLoad => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RowKey {
    pub family: Family,
    pub indices: Vec<usize>,
}

/// A built model together with the registries mapping model columns and
/// rows back to their roles.
#[derive(Debug, Clone)]
pub struct ModelHandle {
    pub model: LinearModel,
    instance: Instance,
    subset: Vec<usize>,
    options: FormulationOptions,
    vars: BTreeMap<VarKey, VarId>,
    rows: BTreeMap<RowKey, usize>,
}

impl ModelHandle {
    pub fn instance(&self) -> &Instance {
        &self.instance
    }

    pub fn scenario_subset(&self) -> &[usize] {
        &self.subset
    }

    pub fn options(&self) -> FormulationOptions {
        self.options
    }

    pub fn var(&self, key: VarKey) -> Option<VarId> {
        self.vars.get(&key).copied()
    }

    pub fn row(&self, key: &RowKey) -> Option<usize> {
        self.rows.get(key).copied()
    }

    pub fn count_rows(&self, family: Family) -> usize {
        self.rows.keys().filter(|k| k.family == family).count()
    }

    pub fn count_vars(&self, pred: impl Fn(&VarKey) -> bool) -> usize {
        self.vars.keys().filter(|k| pred(k)).count()
    }

    /// Pins `u`, `x`, `y` and `a` to the values of `sol`, turning the
    /// model into the second-stage LP of that first stage.
    pub fn fix_first_stage(&mut self, sol: &FirstStageSolution) -> Result<(), MilpError> {
        let inst = &self.instance;
        let n = inst.n_patients();
        if sol.n_patients() != n {
            return Err(MilpError::Dimension(format!(
                "solution has {} patients, model has {n}",
                sol.n_patients()
            )));
        }
        let mut fixes = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    fixes.push((VarKey::Precedence { i, j }, f64::from(u8::from(sol.precedence[i][j]))));
                }
            }
            for c in 0..inst.chair_count {
                fixes.push((VarKey::Chair { i, c }, f64::from(u8::from(sol.chair[i] == c))));
            }
            for &nurse in &inst.eligible_nurses[i] {
                fixes.push((VarKey::Nurse { i, n: nurse }, f64::from(u8::from(sol.nurse[i] == nurse))));
            }
            fixes.push((VarKey::Appointment { i }, sol.appointments[i]));
        }
        for (key, value) in fixes {
            let var = self
                .var(key)
                .ok_or_else(|| MilpError::Dimension(format!("no column for {key:?}")))?;
            self.model.fix(var, value);
        }
        Ok(())
    }

    fn extract_first_stage(&self, values: &[f64]) -> FirstStageSolution {
        let inst = &self.instance;
        let n = inst.n_patients();
        let value = |key| values[self.vars[&key].0];
        let mut precedence = vec![vec![false; n]; n];
        for i in 0..n {
            for j in (i + 1)..n {
                let forward = value(VarKey::Precedence { i, j }) >= value(VarKey::Precedence { i: j, j: i });
                precedence[i][j] = forward;
                precedence[j][i] = !forward;
            }
        }
        let argmax = |keys: Vec<(usize, VarKey)>| {
            keys.into_iter()
                .map(|(idx, k)| (idx, value(k)))
                .fold((0, f64::NEG_INFINITY), |best, cur| if cur.1 > best.1 { cur } else { best })
                .0
        };
        let chair = (0..n)
            .map(|i| argmax((0..inst.chair_count).map(|c| (c, VarKey::Chair { i, c })).collect()))
            .collect();
        let nurse = (0..n)
            .map(|i| argmax(inst.eligible_nurses[i].iter().map(|&m| (m, VarKey::Nurse { i, n: m })).collect()))
            .collect();
        let appointments = (0..n)
            .map(|i| {
                let a = value(VarKey::Appointment { i }).max(0.0);
                if self.options.integer_appointments {
                    a.round()
                } else {
                    a
                }
            })
            .collect();
        FirstStageSolution {
            precedence,
            appointments,
            nurse,
            chair,
        }
    }

    fn fix_discrete(&mut self, sol: &FirstStageSolution) {
        let n = self.instance.n_patients();
        let mut fixes = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    fixes.push((VarKey::Precedence { i, j }, f64::from(u8::from(sol.precedence[i][j]))));
                }
            }
            for c in 0..self.instance.chair_count {
                fixes.push((VarKey::Chair { i, c }, f64::from(u8::from(sol.chair[i] == c))));
            }
            for &m in &self.instance.eligible_nurses[i] {
                fixes.push((VarKey::Nurse { i, n: m }, f64::from(u8::from(sol.nurse[i] == m))));
            }
        }
        for (key, value) in fixes {
            let var = self.vars[&key];
            self.model.fix(var, value);
        }
    }
}

struct Builder {
    model: LinearModel,
    vars: BTreeMap<VarKey, VarId>,
    rows: BTreeMap<RowKey, usize>,
}

impl Builder {
    fn var(&mut self, key: VarKey, name: String, kind: VarKind, lower: f64, upper: f64, objective: f64) -> VarId {
        let id = self.model.add_column(name, kind, lower, upper, objective);
        self.vars.insert(key, id);
        id
    }

    fn row(&mut self, family: Family, indices: Vec<usize>, terms: Vec<(VarId, f64)>, lower: f64, upper: f64) {
        let name = std::iter::once(family_tag(family).to_string())
            .chain(indices.iter().map(usize::to_string))
            .collect::<Vec<_>>()
            .join("_");
        let r = self.model.add_row(name, terms, lower, upper);
        self.rows.insert(RowKey { family, indices }, r);
    }

    fn get(&self, key: VarKey) -> VarId {
        self.vars[&key]
    }
}

fn family_tag(family: Family) -> &'static str {
    match family {
        Family::Tournament => "tour",
        Family::Order => "order",
        Family::ChairAssignment => "chair",
        Family::NurseAssignment => "nurse",
        Family::Flexibility => "flex",
        Family::ChairSymmetry => "sym",
        Family::NursePrecedence => "nprec",
        Family::ChairPrecedence => "cprec",
        Family::OvertimeDefinition => "otdef",
        Family::OvertimeCap => "otcap",
        Family::Transitivity => "trans",
        Family::StartCap => "start",
        Family::ChairLoad => "load",
    }
}

/// Builds the extensive form over `scenario_subset` (indices into
/// `inst.scenarios`), each scenario weighted `1 / |subset|`.
pub fn build_extensive_form(
    inst: &Instance,
    scenario_subset: &[usize],
    options: FormulationOptions,
) -> Result<ModelHandle, MilpError> {
    if scenario_subset.is_empty() {
        return Err(MilpError::EmptySubset);
    }
    if let Some(&w) = scenario_subset.iter().find(|&&w| w >= inst.n_scenarios()) {
        return Err(MilpError::ScenarioOutOfRange(w));
    }
    let violations = validate_instance(inst);
    if !violations.is_empty() {
        return Err(MilpError::InvalidInstance(violations));
    }

    let n = inst.n_patients();
    // Every patient finishes by H + L, so a, w <= H + L and the
    // start-difference rows never need more than H + L to switch off.
    let horizon = inst.shift_length + inst.overtime_limit;
    let (m_seq, m_overtime) = if options.tight_big_m {
        (horizon.min(inst.big_m), inst.overtime_limit.min(inst.big_m))
    } else {
        (inst.big_m, inst.big_m)
    };
    let s = inst.premed_duration;
    let weight = 1.0 / scenario_subset.len() as f64;
    let mut b = Builder {
        model: LinearModel::new(),
        vars: BTreeMap::new(),
        rows: BTreeMap::new(),
    };

    // First-stage columns.
    for i in 0..n {
        for j in 0..n {
            if i != j {
                b.var(VarKey::Precedence { i, j }, format!("u_{i}_{j}"), VarKind::Binary, 0.0, 1.0, 0.0);
            }
        }
    }
    for i in 0..n {
        for c in 0..inst.chair_count {
            b.var(VarKey::Chair { i, c }, format!("y_{i}_{c}"), VarKind::Binary, 0.0, 1.0, 0.0);
        }
    }
    for i in 0..n {
        for &nurse in &inst.eligible_nurses[i] {
            b.var(VarKey::Nurse { i, n: nurse }, format!("x_{i}_{nurse}"), VarKind::Binary, 0.0, 1.0, 0.0);
        }
    }
    let a_kind = if options.integer_appointments {
        VarKind::Integer
    } else {
        VarKind::Continuous
    };
    for i in 0..n {
        b.var(VarKey::Appointment { i }, format!("a_{i}"), a_kind, 0.0, horizon, 0.0);
    }

    // First-stage rows.
    for i in 0..n {
        for j in (i + 1)..n {
            let terms = vec![(b.get(VarKey::Precedence { i, j }), 1.0), (b.get(VarKey::Precedence { i: j, j: i }), 1.0)];
            b.row(Family::Tournament, vec![i, j], terms, 1.0, 1.0);
        }
    }
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            // a_j - a_i - M u_ij >= -M
            let terms = vec![
                (b.get(VarKey::Appointment { i: j }), 1.0),
                (b.get(VarKey::Appointment { i }), -1.0),
                (b.get(VarKey::Precedence { i, j }), -m_seq),
            ];
            b.row(Family::Order, vec![i, j], terms, -m_seq, INF);
        }
    }
    for i in 0..n {
        let terms = (0..inst.chair_count).map(|c| (b.get(VarKey::Chair { i, c }), 1.0)).collect();
        b.row(Family::ChairAssignment, vec![i], terms, 1.0, 1.0);
    }
    for i in 0..n {
        let terms = inst.eligible_nurses[i]
            .iter()
            .map(|&nurse| (b.get(VarKey::Nurse { i, n: nurse }), 1.0))
            .collect();
        b.row(Family::NurseAssignment, vec![i], terms, 1.0, 1.0);
    }
    let flex_terms: Vec<_> = (0..n)
        .flat_map(|i| {
            inst.eligible_nurses[i]
                .iter()
                .filter(move |&&nurse| nurse != inst.primary_nurse[i])
                .map(move |&nurse| VarKey::Nurse { i, n: nurse })
        })
        .map(|k| (b.get(k), 1.0))
        .collect();
    b.row(Family::Flexibility, vec![], flex_terms, f64::NEG_INFINITY, inst.flexibility_limit as f64);

    if options.chair_symmetry_breaking {
        for i in 0..n {
            for c in 1..inst.chair_count {
                // y_ic <= sum_{k < i} y_{k, c-1}
                let mut terms = vec![(b.get(VarKey::Chair { i, c }), 1.0)];
                terms.extend((0..i).map(|k| (b.get(VarKey::Chair { i: k, c: c - 1 }), -1.0)));
                b.row(Family::ChairSymmetry, vec![i, c], terms, f64::NEG_INFINITY, 0.0);
            }
        }
    }

    if options.transitivity_cuts {
        for i in 0..n {
            for j in (i + 1)..n {
                for k in (j + 1)..n {
                    for (p, q, r, tag) in [(i, j, k, 0), (i, k, j, 1)] {
                        let terms = vec![
                            (b.get(VarKey::Precedence { i: p, j: q }), 1.0),
                            (b.get(VarKey::Precedence { i: q, j: r }), 1.0),
                            (b.get(VarKey::Precedence { i: r, j: p }), 1.0),
                        ];
                        b.row(Family::Transitivity, vec![i, j, k, tag], terms, f64::NEG_INFINITY, 2.0);
                    }
                }
            }
        }
    }

    // Second stage, one block per scenario.
    for &w in scenario_subset {
        let t = &inst.scenarios[w];
        for i in 0..n {
            b.var(
                VarKey::Wait { scenario: w, i },
                format!("w_{w}_{i}"),
                VarKind::Continuous,
                0.0,
                horizon,
                weight * inst.lambda,
            );
        }
        for nurse in 0..inst.nurse_count {
            b.var(
                VarKey::Overtime { scenario: w, n: nurse },
                format!("o_{w}_{nurse}"),
                VarKind::Continuous,
                0.0,
                INF,
                weight * (1.0 - inst.lambda),
            );
        }

        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let start_diff = [
                    (b.get(VarKey::Appointment { i: j }), 1.0),
                    (b.get(VarKey::Wait { scenario: w, i: j }), 1.0),
                    (b.get(VarKey::Appointment { i }), -1.0),
                    (b.get(VarKey::Wait { scenario: w, i }), -1.0),
                    (b.get(VarKey::Precedence { i, j }), -m_seq),
                ];
                for &nurse in &inst.eligible_nurses[i] {
                    if !inst.is_eligible(j, nurse) {
                        continue;
                    }
                    // a_j + w_j >= a_i + w_i + s - M (3 - u_ij - x_in - x_jn)
                    let mut terms = start_diff.to_vec();
                    terms.push((b.get(VarKey::Nurse { i, n: nurse }), -m_seq));
                    terms.push((b.get(VarKey::Nurse { i: j, n: nurse }), -m_seq));
                    b.row(Family::NursePrecedence, vec![w, i, j, nurse], terms, s - 3.0 * m_seq, INF);
                }
                for c in 0..inst.chair_count {
                    // a_j + w_j >= a_i + w_i + s + t_i - M (3 - u_ij - y_ic - y_jc)
                    let mut terms = start_diff.to_vec();
                    terms.push((b.get(VarKey::Chair { i, c }), -m_seq));
                    terms.push((b.get(VarKey::Chair { i: j, c }), -m_seq));
                    b.row(Family::ChairPrecedence, vec![w, i, j, c], terms, s + t[i] - 3.0 * m_seq, INF);
                }
            }
        }
        for i in 0..n {
            for &nurse in &inst.eligible_nurses[i] {
                // o_n >= a_i + w_i + s + t_i - H - M (1 - x_in)
                let terms = vec![
                    (b.get(VarKey::Overtime { scenario: w, n: nurse }), 1.0),
                    (b.get(VarKey::Appointment { i }), -1.0),
                    (b.get(VarKey::Wait { scenario: w, i }), -1.0),
                    (b.get(VarKey::Nurse { i, n: nurse }), -m_overtime),
                ];
                b.row(
                    Family::OvertimeDefinition,
                    vec![w, i, nurse],
                    terms,
                    s + t[i] - inst.shift_length - m_overtime,
                    INF,
                );
            }
        }
        if options.start_caps {
            for i in 0..n {
                let terms = vec![
                    (b.get(VarKey::Appointment { i }), 1.0),
                    (b.get(VarKey::Wait { scenario: w, i }), 1.0),
                ];
                b.row(Family::StartCap, vec![w, i], terms, f64::NEG_INFINITY, horizon - s - t[i]);
            }
        }
        if options.chair_load_cuts {
            for c in 0..inst.chair_count {
                // sum_n o_n >= sum_i (s + t_i) y_ic - H
                let mut terms: Vec<_> = (0..inst.nurse_count)
                    .map(|nurse| (b.get(VarKey::Overtime { scenario: w, n: nurse }), 1.0))
                    .collect();
                terms.extend((0..n).map(|i| (b.get(VarKey::Chair { i, c }), -(s + t[i]))));
                b.row(Family::ChairLoad, vec![w, c], terms, -inst.shift_length, INF);
            }
        }
        for nurse in 0..inst.nurse_count {
            let terms = vec![(b.get(VarKey::Overtime { scenario: w, n: nurse }), 1.0)];
            b.row(Family::OvertimeCap, vec![w, nurse], terms, f64::NEG_INFINITY, inst.overtime_limit);
        }
    }

    let Builder { model, vars, rows } = b;
    Ok(ModelHandle {
        model,
        instance: inst.clone(),
        subset: scenario_subset.to_vec(),
        options,
        vars,
        rows,
    })
}

/// Single-scenario model with every duration replaced by its mean over
/// all scenarios.
pub fn build_mean_value_problem(inst: &Instance, options: FormulationOptions) -> Result<ModelHandle, MilpError> {
    build_extensive_form(&mean_value_instance(inst), &[0], options)
}

/// `inst` with its scenarios collapsed to the per-patient mean.
pub fn mean_value_instance(inst: &Instance) -> Instance {
    let mut mvp = inst.clone();
    mvp.scenarios = vec![inst.mean_durations()];
    mvp
}

/// Solves a built model and returns the incumbent first stage.
///
/// Binaries are rounded, then the appointment times are re-optimized with
/// the discrete decisions fixed so that they are optimal to LP precision.
/// The report objective is the closed-form evaluation of the returned first
/// stage over the model's scenarios.
pub fn solve(
    handle: &ModelHandle,
    backend: &dyn SolverBackend,
    limits: &SolveLimits,
) -> Result<(FirstStageSolution, SolveReport), MilpError> {
    let started = Instant::now();
    let result = backend.solve(&handle.model, limits);
    let values = match (&result.values, result.status) {
        (Some(v), _) => v,
        (None, SolveStatus::Infeasible) => return Err(MilpError::Infeasible),
        (None, SolveStatus::TimeLimit) => return Err(MilpError::NoIncumbent),
        (None, status) => return Err(MilpError::Backend(format!("{} finished with {status:?}", backend.name()))),
    };
    let mut sol = handle.extract_first_stage(values);

    let mut polish = handle.clone();
    polish.fix_discrete(&sol);
    let polished = backend.solve(&polish.model, &SolveLimits::default());
    if let Some(v) = &polished.values {
        let candidate = polish.extract_first_stage(v);
        sol.appointments = candidate.appointments;
    } else {
        log::warn!("appointment polish failed ({:?}); keeping raw incumbent", polished.status);
    }

    let violations = validate_first_stage(&handle.instance, &sol);
    if !violations.is_empty() {
        return Err(MilpError::InvalidIncumbent(violations));
    }
    let mut report = Evaluator::new(&handle.instance, &sol)?.expected_over(&handle.subset)?;
    report.method = "exact".into();
    report.status = result.status;
    report.bound = result.bound;
    report.wall_time_s = started.elapsed().as_secs_f64();
    Ok((sol, report))
}

/// Builds and solves the extensive form over every scenario.
pub fn solve_extensive_form(
    inst: &Instance,
    backend: &dyn SolverBackend,
    limits: &SolveLimits,
    options: FormulationOptions,
) -> Result<(FirstStageSolution, SolveReport), MilpError> {
    let all: Vec<usize> = (0..inst.n_scenarios()).collect();
    let handle = build_extensive_form(inst, &all, options)?;
    solve(&handle, backend, limits)
}

/// Expected cost of a fixed first stage over `subset`, through the
/// closed-form evaluator.
pub fn evaluate_fixed_first_stage(inst: &Instance, sol: &FirstStageSolution, subset: &[usize]) -> Result<f64, MilpError> {
    Ok(Evaluator::new(inst, sol)?.expected_over(subset)?.objective)
}

/// Per-scenario totals of the second-stage LP.
#[derive(Debug, Clone, PartialEq)]
pub struct FixedStageLp {
    pub objective: f64,
    /// `(scenario, sum of waits, sum of overtimes)` in subset order.
    pub scenario_totals: Vec<(usize, f64, f64)>,
}

/// The same quantity as [`evaluate_fixed_first_stage`], computed by fixing
/// the first stage inside the extensive form and solving the remaining LP
/// with the backend. Used to cross-check the evaluator.
pub fn evaluate_fixed_first_stage_lp(
    inst: &Instance,
    sol: &FirstStageSolution,
    subset: &[usize],
    backend: &dyn SolverBackend,
) -> Result<FixedStageLp, MilpError> {
    let options = FormulationOptions::plain();
    let mut handle = build_extensive_form(inst, subset, options)?;
    handle.fix_first_stage(sol)?;
    let res = backend.solve(&handle.model, &SolveLimits::default());
    let values = match (res.values, res.status) {
        (Some(v), _) => v,
        (None, SolveStatus::Infeasible) => return Err(MilpError::Infeasible),
        (None, status) => return Err(MilpError::Backend(format!("second-stage LP finished with {status:?}"))),
    };
    let scenario_totals = subset
        .iter()
        .map(|&w| {
            let wait = (0..inst.n_patients())
                .map(|i| values[handle.vars[&VarKey::Wait { scenario: w, i }].0])
                .sum();
            let overtime = (0..inst.nurse_count)
                .map(|n| values[handle.vars[&VarKey::Overtime { scenario: w, n }].0])
                .sum();
            (w, wait, overtime)
        })
        .collect();
    Ok(FixedStageLp {
        objective: handle.model.objective_value(&values),
        scenario_totals,
    })
}
