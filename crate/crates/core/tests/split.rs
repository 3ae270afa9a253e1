mod common;

use common::{cut_brute_force, on_line, tiny_instance, tiny_permutation};
use fpscp::model::Instance;
use fpscp::split::{route_distance, split};
use fpscp::Permutation;

#[test]
fn single_customer() {
    let inst = on_line(&[(2.5, 3.0)], &[], 5.0, 1.0);
    let plan = split(&inst, &Permutation::identity(1)).unwrap();
    assert_eq!(plan.routes, vec![vec![0]]);
    assert_eq!(plan.total_distance, 5.0);
}

#[test]
fn oversized_customer_is_infeasible() {
    let inst = on_line(&[(1.0, 3.0), (2.0, 6.0)], &[], 5.0, 10.0);
    assert!(split(&inst, &Permutation::identity(2)).is_none());
}

#[test]
fn equals_cut_enumeration() {
    for seed in 0..100u64 {
        let inst = tiny_instance(10_000 + seed, 8, 0);
        let perm = tiny_permutation(&inst, seed);
        let plan = split(&inst, &perm);
        let brute = cut_brute_force(&inst, &perm);
        assert_eq!(plan.as_ref().map(|p| p.total_distance), brute, "seed {seed}");
        if let Some(p) = plan {
            let flat: Vec<usize> = p.routes.concat();
            assert_eq!(flat, perm.order());
            let sum: f64 = p.routes.iter().map(|r| route_distance(&inst, r)).sum();
            assert_eq!(sum, p.total_distance);
        }
    }
}

#[test]
fn unlimited_cargo_gives_one_route() {
    for seed in 0..30u64 {
        let base = tiny_instance(11_000 + seed, 8, 2);
        let inst = Instance::new(
            "big-q",
            base.depot(),
            base.customers().to_vec(),
            base.stations().to_vec(),
            1e12,
            base.battery_capacity(),
            base.consumption_rate(),
        )
        .unwrap();
        let perm = tiny_permutation(&inst, seed);
        let plan = split(&inst, &perm).unwrap();
        assert_eq!(plan.routes.len(), 1);
        assert_eq!(plan.total_distance, route_distance(&inst, perm.order()));
    }
}

#[test]
fn battery_parameters_do_not_matter() {
    for seed in 0..30u64 {
        let base = tiny_instance(12_000 + seed, 8, 2);
        let perm = tiny_permutation(&base, seed);
        let other = Instance::new(
            "other-battery",
            base.depot(),
            base.customers().to_vec(),
            base.stations().to_vec(),
            base.cargo_capacity(),
            base.battery_capacity() * 0.1,
            base.consumption_rate() * 7.0,
        )
        .unwrap();
        assert_eq!(split(&base, &perm), split(&other, &perm));
    }
}

#[test]
fn ties_prefer_earliest_cut() {
    // two customers at the same spot, Q fits both: one route and two routes differ,
    // but with both at the depot every cut pattern costs 0
    let inst = on_line(&[(0.0, 1.0), (0.0, 1.0)], &[], 5.0, 1.0);
    let plan = split(&inst, &Permutation::identity(2)).unwrap();
    assert_eq!(plan.total_distance, 0.0);
    assert_eq!(plan.routes, vec![vec![0, 1]]);
}
