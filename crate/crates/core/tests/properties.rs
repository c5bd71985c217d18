mod common;

use chemosched::sgbd::{group_closest, group_furthest, group_random, scenario_distance};
use chemosched::{
    evaluate_scenario, sample_instance, validate_first_stage, BaseParameters, FirstStageSolution, Instance,
    SamplerSpec, TypeSource,
};
use proptest::prelude::*;

fn instance_and_stage() -> impl Strategy<Value = (Instance, FirstStageSolution)> {
    (1usize..=7, 1usize..=3, 1usize..=3, 0usize..=3, 0.0f64..=1.0, any::<u64>()).prop_map(
        |(p, nurses, chairs, flex, lambda, seed)| {
            let mut rng = common::rng(seed);
            let inst = common::random_instance(&mut rng, p, 2, nurses, chairs, lambda, flex, (16.0, 217.0));
            let sol = common::random_first_stage(&mut rng, &inst);
            (inst, sol)
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn sequences_give_tournaments(order in Just((0..8).collect::<Vec<usize>>()).prop_shuffle()) {
        let sol = FirstStageSolution::from_sequence(&order, vec![0.0; 8], vec![0; 8], vec![0; 8]);
        for i in 0..8 {
            prop_assert!(!sol.precedence[i][i]);
            for j in (i + 1)..8 {
                prop_assert!(sol.precedence[i][j] ^ sol.precedence[j][i]);
            }
        }
        prop_assert_eq!(sol.sequence().unwrap(), order);
    }

    #[test]
    fn generated_first_stages_are_valid((inst, sol) in instance_and_stage()) {
        prop_assert!(validate_first_stage(&inst, &sol).is_empty());
    }

    #[test]
    fn evaluator_matches_relaxation_oracle((inst, sol) in instance_and_stage()) {
        for w in 0..inst.n_scenarios() {
            let out = evaluate_scenario(&inst, &sol, w).unwrap();
            let (waits, overtimes) = common::relaxation_second_stage(&inst, &sol, &inst.scenarios[w]);
            for (x, y) in out.waits.iter().zip(&waits) {
                prop_assert!((x - y).abs() < 1e-9, "waits {:?} vs {:?}", out.waits, waits);
            }
            for (x, y) in out.overtimes.iter().zip(&overtimes) {
                prop_assert!((x - y).abs() < 1e-9, "overtimes {:?} vs {:?}", out.overtimes, overtimes);
            }
            let cost = inst.lambda * waits.iter().sum::<f64>() + (1.0 - inst.lambda) * overtimes.iter().sum::<f64>();
            prop_assert!((out.cost - cost).abs() < 1e-9);
        }
    }

    #[test]
    fn longer_durations_never_help((inst, sol) in instance_and_stage(), bump in 0.0f64..60.0, who in 0usize..7) {
        let base = evaluate_scenario(&inst, &sol, 0).unwrap();
        let mut longer = inst.clone();
        let i = who % inst.n_patients();
        longer.scenarios[0][i] += bump;
        longer.big_m = longer.safe_big_m();
        let out = evaluate_scenario(&longer, &sol, 0).unwrap();
        for (a, b) in out.waits.iter().zip(&base.waits) {
            prop_assert!(a >= b);
        }
        for (a, b) in out.overtimes.iter().zip(&base.overtimes) {
            prop_assert!(a >= b);
        }
    }

    #[test]
    fn later_appointments_never_add_waits((inst, sol) in instance_and_stage(), shift in 0.0f64..100.0) {
        // Shifting every appointment by the same amount keeps the waits.
        let mut moved = sol.clone();
        for a in &mut moved.appointments {
            *a += shift;
        }
        let x = evaluate_scenario(&inst, &sol, 0).unwrap();
        let y = evaluate_scenario(&inst, &moved, 0).unwrap();
        for (a, b) in x.waits.iter().zip(&y.waits) {
            prop_assert!((a - b).abs() < 1e-9);
        }
        for (a, b) in x.overtimes.iter().zip(&y.overtimes) {
            prop_assert!(b + 1e-9 >= *a);
        }
    }

    #[test]
    fn separated_patients_do_not_wait(p in 1usize..=6, seed in any::<u64>()) {
        // One chair per patient and enough nurse spacing: nobody waits.
        let mut rng = common::rng(seed);
        let inst = common::random_instance(&mut rng, p, 3, 1, p, 0.5, 0, (16.0, 217.0));
        let a: Vec<f64> = (0..p).map(|i| 15.0 * i as f64).collect();
        let sol = FirstStageSolution::from_appointments(a, vec![0; p], (0..p).collect());
        for w in 0..3 {
            let out = evaluate_scenario(&inst, &sol, w).unwrap();
            prop_assert!(out.waits.iter().all(|&x| x == 0.0));
        }
    }

    #[test]
    fn plans_are_partitions(n in 1usize..=40, z in 1usize..=40, seed in any::<u64>()) {
        let z = 1 + (z - 1) % n;
        let mut rng = common::rng(seed);
        let inst = common::random_instance(&mut rng, 3, n, 2, 3, 0.3, 2, (16.0, 217.0));
        for plan in [group_furthest(&inst, z, seed), group_closest(&inst, z, seed), group_random(&inst, z, seed)] {
            let plan = plan.unwrap();
            prop_assert!(plan.check_partition(n).is_ok());
            let sizes = plan.sizes();
            prop_assert_eq!(sizes.len(), n.div_ceil(z));
            prop_assert!(sizes[..sizes.len() - 1].iter().all(|&s| s == z));
            prop_assert_eq!(*sizes.last().unwrap(), n - z * (sizes.len() - 1));
        }
    }

    #[test]
    fn distance_matches_definition(v in prop::collection::vec((0.0f64..300.0, 0.0f64..300.0), 1..12)) {
        let (a, b): (Vec<f64>, Vec<f64>) = v.into_iter().unzip();
        let mut acc = 0.0;
        for k in 0..a.len() {
            acc += (a[k] - b[k]).powi(2);
        }
        prop_assert!((scenario_distance(&a, &b).unwrap() - acc.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn instance_json_round_trip(p in 1usize..=9, seed in any::<u64>()) {
        let spec = SamplerSpec::new(TypeSource::Drawn(p), 5, seed);
        let inst = sample_instance(&spec, &BaseParameters::default()).unwrap();
        let text = serde_json::to_string(&inst).unwrap();
        let back: Instance = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back, inst);
    }

    #[test]
    fn solution_json_round_trip((_inst, sol) in instance_and_stage()) {
        let text = serde_json::to_string(&sol).unwrap();
        let back: FirstStageSolution = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back, sol);
    }
}

#[test]
fn sample_means_converge_to_midpoints() {
    let types = vec![1, 2, 3, 4];
    let spec = SamplerSpec::new(TypeSource::Explicit(types), 20_000, 11);
    let inst = sample_instance(&spec, &BaseParameters::default()).unwrap();
    let mids = [30.0, 54.5, 103.0, 171.0];
    let halfwidths = [14.0, 25.5, 29.0, 46.0];
    for (i, mean) in inst.mean_durations().iter().enumerate() {
        // uniform sd = halfwidth / sqrt(3); allow five standard errors
        let se = halfwidths[i] / 3f64.sqrt() / (20_000f64).sqrt();
        assert!((mean - mids[i]).abs() < 5.0 * se, "type {}: {mean}", i + 1);
        for w in 0..inst.n_scenarios() {
            let t = inst.scenarios[w][i];
            assert!(t >= mids[i] - halfwidths[i] && t <= mids[i] + halfwidths[i]);
        }
    }
}
