//! Independent oracles and generators shared by the integration tests.
#![allow(dead_code)]

use chemosched::{FirstStageSolution, Instance};
use minilp::{ComparisonOp, OptimizationDirection, Problem};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// The Figure 1 clinic day: nine patients, two nurses, three chairs.
pub fn clinic_day() -> (Instance, FirstStageSolution) {
    let durations = vec![39.0, 117.0, 23.0, 38.0, 73.0, 161.0, 25.0, 185.0, 31.0];
    let inst = Instance::new(2, 3, 15.0, 240.0, 0.3, 0, vec![durations]);
    let a = vec![0.0, 115.0, 58.0, 168.0, 166.0, 15.0, 251.0, 0.0, 234.0];
    let nurse = vec![0, 1, 0, 1, 0, 1, 0, 1, 0];
    let chair = vec![0, 0, 0, 2, 1, 2, 0, 1, 2];
    (inst, FirstStageSolution::from_appointments(a, nurse, chair))
}

/// Random instance with uniform durations in `[lo, hi]`.
#[allow(clippy::too_many_arguments)]
pub fn random_instance(
    rng: &mut ChaCha8Rng,
    patients: usize,
    scenarios: usize,
    nurses: usize,
    chairs: usize,
    lambda: f64,
    flex: usize,
    (lo, hi): (f64, f64),
) -> Instance {
    let t = (0..scenarios)
        .map(|_| (0..patients).map(|_| rng.random_range(lo..=hi)).collect())
        .collect();
    Instance::new(nurses, chairs, 15.0, 240.0, lambda, flex, t)
}

/// Random first stage that satisfies every first-stage rule of `inst`.
pub fn random_first_stage(rng: &mut ChaCha8Rng, inst: &Instance) -> FirstStageSolution {
    let p = inst.n_patients();
    let mut order: Vec<usize> = (0..p).collect();
    order.shuffle(rng);
    let mut times: Vec<f64> = (0..p).map(|_| (rng.random_range(0.0..inst.shift_length) * 4.0).round() / 4.0).collect();
    times.sort_by(f64::total_cmp);
    let mut a = vec![0.0; p];
    for (k, &i) in order.iter().enumerate() {
        a[i] = times[k];
    }
    let mut nurse = inst.primary_nurse.clone();
    let mut moved = 0;
    for i in 0..p {
        if moved < inst.flexibility_limit && rng.random_bool(0.4) {
            let choices = &inst.eligible_nurses[i];
            let n = choices[rng.random_range(0..choices.len())];
            if n != nurse[i] {
                nurse[i] = n;
                moved += 1;
            }
        }
    }
    let chair = (0..p).map(|_| rng.random_range(0..inst.chair_count)).collect();
    FirstStageSolution::from_sequence(&order, a, nurse, chair)
}

/// Second stage by repeated relaxation of the start-time recursion until
/// nothing changes. Knows nothing about topological orders.
pub fn relaxation_second_stage(inst: &Instance, sol: &FirstStageSolution, t: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let p = inst.n_patients();
    let s = inst.premed_duration;
    let mut start = sol.appointments.clone();
    for _ in 0..=p {
        let mut changed = false;
        for i in 0..p {
            for j in 0..p {
                if i == j || !sol.precedence[i][j] {
                    continue;
                }
                let mut need = f64::NEG_INFINITY;
                if sol.nurse[i] == sol.nurse[j] {
                    need = need.max(start[i] + s);
                }
                if sol.chair[i] == sol.chair[j] {
                    need = need.max(start[i] + s + t[i]);
                }
                if need > start[j] {
                    start[j] = need;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    let waits = (0..p).map(|i| start[i] - sol.appointments[i]).collect();
    let mut overtime = vec![0.0_f64; inst.nurse_count];
    for i in 0..p {
        let o = &mut overtime[sol.nurse[i]];
        *o = o.max(start[i] + s + t[i] - inst.shift_length);
    }
    (waits, overtime)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for k in 0..used.len() {
            if !used[k] {
                used[k] = true;
                prefix.push(k);
                rec(prefix, used, out);
                prefix.pop();
                used[k] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Nurse vectors within eligibility and the flexibility limit.
fn nurse_assignments(inst: &Instance) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for i in 0..inst.n_patients() {
        let mut next = Vec::new();
        for partial in &out {
            for &n in &inst.eligible_nurses[i] {
                let mut v: Vec<usize> = partial.clone();
                v.push(n);
                let moved = v.iter().enumerate().filter(|&(k, &m)| m != inst.primary_nurse[k]).count();
                if moved <= inst.flexibility_limit {
                    next.push(v);
                }
            }
        }
        out = next;
    }
    out
}

/// Chair labelings up to renaming of the (identical) chairs.
fn chair_labelings(patients: usize, chairs: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..patients {
        let mut next = Vec::new();
        for partial in &out {
            let used = partial.iter().map(|&c| c + 1).max().unwrap_or(0);
            for c in 0..=used.min(chairs - 1) {
                let mut v: Vec<usize> = partial.clone();
                v.push(c);
                next.push(v);
            }
        }
        out = next;
    }
    out
}

/// Optimal appointment times for a fixed sequence and assignment, by LP
/// over `a`, waits and overtimes in every scenario. `None` if infeasible.
pub fn sequence_lp(inst: &Instance, order: &[usize], nurse: &[usize], chair: &[usize]) -> Option<(f64, Vec<f64>)> {
    let p = inst.n_patients();
    let s = inst.premed_duration;
    let h = inst.shift_length;
    let horizon = h + inst.overtime_limit;
    let weight = 1.0 / inst.n_scenarios() as f64;
    let mut lp = Problem::new(OptimizationDirection::Minimize);
    let a: Vec<_> = (0..p).map(|_| lp.add_var(0.0, (0.0, horizon))).collect();
    for k in 1..p {
        lp.add_constraint([(a[order[k]], 1.0), (a[order[k - 1]], -1.0)], ComparisonOp::Ge, 0.0);
    }
    for t in &inst.scenarios {
        let w: Vec<_> = (0..p).map(|_| lp.add_var(weight * inst.lambda, (0.0, f64::INFINITY))).collect();
        let o: Vec<_> = (0..inst.nurse_count)
            .map(|_| lp.add_var(weight * (1.0 - inst.lambda), (0.0, inst.overtime_limit)))
            .collect();
        for x in 0..p {
            for y in (x + 1)..p {
                let (i, j) = (order[x], order[y]);
                let mut gap = None;
                if nurse[i] == nurse[j] {
                    gap = Some(s);
                }
                if chair[i] == chair[j] {
                    gap = Some(s + t[i]);
                }
                if let Some(d) = gap {
                    lp.add_constraint([(a[j], 1.0), (w[j], 1.0), (a[i], -1.0), (w[i], -1.0)], ComparisonOp::Ge, d);
                }
            }
        }
        for i in 0..p {
            lp.add_constraint([(o[nurse[i]], 1.0), (a[i], -1.0), (w[i], -1.0)], ComparisonOp::Ge, s + t[i] - h);
        }
    }
    let sol = lp.solve().ok()?;
    Some((sol.objective(), a.iter().map(|&v| sol[v]).collect()))
}

/// Exhaustive optimum over sequences, nurse assignments and chair
/// labelings, with appointment times from [`sequence_lp`].
pub fn brute_force(inst: &Instance) -> Option<(f64, FirstStageSolution)> {
    let nurses = nurse_assignments(inst);
    let chairs = chair_labelings(inst.n_patients(), inst.chair_count);
    let mut best: Option<(f64, FirstStageSolution)> = None;
    for order in permutations(inst.n_patients()) {
        for nurse in &nurses {
            for chair in &chairs {
                if let Some((z, a)) = sequence_lp(inst, &order, nurse, chair) {
                    if best.as_ref().is_none_or(|(b, _)| z < *b) {
                        best = Some((z, FirstStageSolution::from_sequence(&order, a, nurse.clone(), chair.clone())));
                    }
                }
            }
        }
    }
    best
}
