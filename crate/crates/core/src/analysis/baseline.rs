use crate::instance::Instance;
use crate::sampler::{default_type_table, expected_durations};
use crate::solution::FirstStageSolution;

/// Start of the second arrival slot, in minutes after the shift start.
pub const SECOND_SLOT: f64 = 150.0;

/// Two-slot schedule in the style of current clinic practice, with
/// expected durations taken from the default type table.
pub fn baseline_schedule(inst: &Instance) -> FirstStageSolution {
    baseline_schedule_with(inst, &expected_durations(inst, &default_type_table()))
}

/// Longest expected treatments first: the first `ceil(P/2)` patients
/// arrive at 0 and the rest at [`SECOND_SLOT`]. Each patient keeps their
/// primary nurse and takes the chair that is expected to free up first.
pub fn baseline_schedule_with(inst: &Instance, expected: &[f64]) -> FirstStageSolution {
    let p = inst.n_patients();
    let mut order: Vec<usize> = (0..p).collect();
    order.sort_by(|&a, &b| expected[b].total_cmp(&expected[a]).then(a.cmp(&b)));

    let first_slot = p.div_ceil(2);
    let mut appointments = vec![0.0; p];
    for &i in &order[first_slot..] {
        appointments[i] = SECOND_SLOT;
    }

    let mut free_at = vec![0.0_f64; inst.chair_count];
    let mut chair = vec![0; p];
    for &i in &order {
        let c = (0..inst.chair_count)
            .min_by(|&x, &y| free_at[x].total_cmp(&free_at[y]).then(x.cmp(&y)))
            .unwrap_or(0);
        chair[i] = c;
        free_at[c] = free_at[c].max(appointments[i]) + inst.premed_duration + expected[i];
    }

    FirstStageSolution::from_sequence(&order, appointments, inst.primary_nurse.clone(), chair)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solution::validate_first_stage;

    #[test]
    fn nine_patients_split_five_four() {
        let row = vec![39.0, 117.0, 23.0, 38.0, 73.0, 161.0, 25.0, 185.0, 31.0];
        let inst = Instance::new(2, 3, 15.0, 240.0, 0.3, 2, vec![row.clone()]);
        let sol = baseline_schedule_with(&inst, &row);
        assert_eq!(sol.appointments.iter().filter(|&&a| a == 0.0).count(), 5);
        assert_eq!(sol.appointments.iter().filter(|&&a| a == SECOND_SLOT).count(), 4);
        assert_eq!(sol.sequence().unwrap(), vec![7, 5, 1, 4, 0, 3, 8, 6, 2]);
        // first three take the three empty chairs
        assert_eq!((sol.chair[7], sol.chair[5], sol.chair[1]), (0, 1, 2));
        assert!(validate_first_stage(&inst, &sol).is_empty());
    }

    #[test]
    fn ties_follow_patient_index() {
        let inst = Instance::new(1, 1, 15.0, 240.0, 0.3, 0, vec![vec![50.0, 50.0]]);
        let sol = baseline_schedule_with(&inst, &[50.0, 50.0]);
        assert_eq!(sol.sequence().unwrap(), vec![0, 1]);
        assert_eq!(sol.appointments, vec![0.0, SECOND_SLOT]);
    }
}
