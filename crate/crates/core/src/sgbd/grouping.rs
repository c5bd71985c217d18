use super::{group_layout, GroupingMethod, GroupingPlan, SgbdError};
use crate::instance::Instance;
use crate::seeded::{index, seeded_rng};

/// Euclidean distance between two duration vectors.
pub fn scenario_distance(a: &[f64], b: &[f64]) -> Result<f64, SgbdError> {
    if a.len() != b.len() {
        return Err(SgbdError::LengthMismatch(a.len(), b.len()));
    }
    Ok(a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt())
}

/// Running mean of the duration vectors added to a group.
#[derive(Debug, Clone, PartialEq)]
pub struct Centroid {
    pub r: Vec<f64>,
    pub members: usize,
}

impl Centroid {
    pub fn new(first: &[f64]) -> Self {
        Self {
            r: first.to_vec(),
            members: 1,
        }
    }

    /// `r <- (k r + t) / (k + 1)` for a group of `k` members.
    pub fn add(&mut self, t: &[f64]) {
        let k = self.members as f64;
        for (r, &x) in self.r.iter_mut().zip(t) {
            *r = (k * *r + x) / (k + 1.0);
        }
        self.members += 1;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Selection {
    Furthest,
    Closest,
}

/// Centroid-driven grouping with a caller-supplied seed rule.
///
/// `pick_seed` receives the ungrouped scenarios in ascending order and
/// returns a position in that slice. Groups are then grown to size `z`
/// (the last one may be smaller) by the furthest or closest ungrouped
/// scenario; distance ties go to the lowest scenario index.
pub fn group_by_centroid_with(
    scenarios: &[Vec<f64>],
    z: usize,
    selection: Selection,
    mut pick_seed: impl FnMut(&[usize]) -> usize,
) -> Result<Vec<Vec<usize>>, SgbdError> {
    check_size(scenarios.len(), z)?;
    let (ng, last) = group_layout(scenarios.len(), z);
    let mut ungrouped: Vec<usize> = (0..scenarios.len()).collect();
    let mut groups = Vec::with_capacity(ng);
    for g in 0..ng {
        let size = if g + 1 == ng { last } else { z };
        let first = ungrouped.remove(pick_seed(&ungrouped));
        let mut centroid = Centroid::new(&scenarios[first]);
        let mut group = vec![first];
        while group.len() < size {
            let mut best: Option<(usize, f64)> = None;
            for (pos, &w) in ungrouped.iter().enumerate() {
                let d = scenario_distance(&centroid.r, &scenarios[w])?;
                let better = match (best, selection) {
                    (None, _) => true,
                    (Some((_, b)), Selection::Furthest) => d > b,
                    (Some((_, b)), Selection::Closest) => d < b,
                };
                if better {
                    best = Some((pos, d));
                }
            }
            let (pos, _) = best.expect("group sizes never exceed the ungrouped count");
            let w = ungrouped.remove(pos);
            centroid.add(&scenarios[w]);
            group.push(w);
        }
        groups.push(group);
    }
    Ok(groups)
}

fn check_size(n_scenarios: usize, z: usize) -> Result<(), SgbdError> {
    if z == 0 || z > n_scenarios {
        return Err(SgbdError::GroupSize {
            size: z,
            scenarios: n_scenarios,
        });
    }
    Ok(())
}

fn centroid_plan(inst: &Instance, z: usize, seed: u64, selection: Selection) -> Result<GroupingPlan, SgbdError> {
    let mut rng = seeded_rng(seed);
    let groups = group_by_centroid_with(&inst.scenarios, z, selection, |ungrouped| index(&mut rng, ungrouped.len()))?;
    Ok(GroupingPlan {
        method: match selection {
            Selection::Furthest => GroupingMethod::Furthest,
            Selection::Closest => GroupingMethod::Closest,
        },
        groups,
        group_size: Some(z),
        merge_factor: None,
        iterations: None,
        seed: Some(seed),
    })
}

/// Groups of dissimilar scenarios: each group grows by the scenario
/// furthest from its centroid.
pub fn group_furthest(inst: &Instance, z: usize, seed: u64) -> Result<GroupingPlan, SgbdError> {
    centroid_plan(inst, z, seed, Selection::Furthest)
}

/// Groups of similar scenarios: each group grows by the scenario closest
/// to its centroid.
pub fn group_closest(inst: &Instance, z: usize, seed: u64) -> Result<GroupingPlan, SgbdError> {
    centroid_plan(inst, z, seed, Selection::Closest)
}

/// Uniformly random groups of size `z`.
pub fn group_random(inst: &Instance, z: usize, seed: u64) -> Result<GroupingPlan, SgbdError> {
    let n = inst.n_scenarios();
    check_size(n, z)?;
    let (ng, last) = group_layout(n, z);
    let mut rng = seeded_rng(seed);
    let mut ungrouped: Vec<usize> = (0..n).collect();
    let groups = (0..ng)
        .map(|g| {
            let size = if g + 1 == ng { last } else { z };
            (0..size).map(|_| ungrouped.remove(index(&mut rng, ungrouped.len()))).collect()
        })
        .collect();
    Ok(GroupingPlan {
        method: GroupingMethod::Random,
        groups,
        group_size: Some(z),
        merge_factor: None,
        iterations: None,
        seed: Some(seed),
    })
}
