#![allow(clippy::needless_range_loop)]

mod common;

use common::tiny_instance;
use fpscp::model::{Instance, Point};
use fpscp::ChargingMatrix;

/// Shortest simple-path length between every charger pair by DFS over all simple paths.
/// `through_depot` keeps only paths that visit charger 0.
fn simple_paths(inst: &Instance, through_depot: bool) -> Vec<Vec<f64>> {
    let size = inst.num_chargers();
    let edge = |a: usize, b: usize| {
        let (u, v) = (inst.charger(a), inst.charger(b));
        inst.fits_battery(inst.consumption_rate() * inst.dist(u, v))
            .then(|| inst.dist(u, v))
    };
    let mut best = vec![vec![f64::INFINITY; size]; size];
    fn dfs(
        at: usize,
        len: f64,
        seen: &mut Vec<bool>,
        start: usize,
        best: &mut [Vec<f64>],
        edge: &dyn Fn(usize, usize) -> Option<f64>,
        through_depot: bool,
    ) {
        if (!through_depot || seen[0]) && len < best[start][at] {
            best[start][at] = len;
        }
        for next in 0..seen.len() {
            if seen[next] {
                continue;
            }
            if let Some(d) = edge(at, next) {
                seen[next] = true;
                dfs(next, len + d, seen, start, best, edge, through_depot);
                seen[next] = false;
            }
        }
    }
    for s in 0..size {
        let mut seen = vec![false; size];
        seen[s] = true;
        dfs(s, 0.0, &mut seen, s, &mut best, &edge, through_depot);
    }
    best
}

fn close(a: f64, b: f64) -> bool {
    a == b || (a - b).abs() <= 1e-12 * a.abs().max(b.abs())
}

fn random_instance(seed: u64) -> Instance {
    tiny_instance(30_000 + seed, 1, 6)
}

#[test]
fn single_edge() {
    let inst = Instance::new(
        "e",
        Point::new(0.0, 0.0),
        vec![],
        vec![Point::new(3.0, 4.0)],
        1.0,
        5.0,
        1.0,
    )
    .unwrap();
    let f = ChargingMatrix::build(&inst);
    assert_eq!(f.dist(0, 1), 5.0);
    assert_eq!(f.reconstruct_path(0, 1).unwrap(), vec![0, 1]);
    assert_eq!(f.reconstruct_path(1, 1).unwrap(), vec![1]);
}

#[test]
fn equals_simple_path_enumeration() {
    let mut finite_multi_hop = 0;
    for seed in 0..150u64 {
        let inst = random_instance(seed);
        let f = ChargingMatrix::build(&inst);
        let oracle = simple_paths(&inst, false);
        let size = inst.num_chargers();
        for i in 0..size {
            for j in 0..size {
                let (a, b) = (f.dist(i, j), oracle[i][j]);
                assert!(close(a, b), "seed {seed} ({i},{j}): {a} vs {b}");
                assert_eq!(f.dist(i, j), f.dist(j, i));
                if a.is_finite() {
                    let path = f.reconstruct_path(i, j).unwrap();
                    assert_eq!((path[0], *path.last().unwrap()), (i, j));
                    let mut sorted = path.clone();
                    sorted.sort_unstable();
                    sorted.dedup();
                    assert_eq!(sorted.len(), path.len(), "path repeats a node");
                    let hops: f64 = path
                        .windows(2)
                        .map(|w| {
                            let d = inst.dist(inst.charger(w[0]), inst.charger(w[1]));
                            assert!(inst.fits_battery(inst.consumption_rate() * d));
                            d
                        })
                        .sum();
                    assert!((hops - a).abs() <= 1e-9 * a.max(1.0));
                    finite_multi_hop += usize::from(path.len() > 2);
                } else {
                    assert!(f.reconstruct_path(i, j).is_err());
                }
                for k in 0..size {
                    let via = f.dist(i, k) + f.dist(k, j);
                    if via.is_finite() {
                        assert!(a <= via * (1.0 + 1e-12));
                    }
                }
            }
            assert_eq!(f.dist(i, i), 0.0);
        }
    }
    assert!(finite_multi_hop > 20, "multi-hop paths {finite_multi_hop}");
}

#[test]
fn depot_split_matches_depot_paths() {
    for seed in 0..150u64 {
        let inst = random_instance(seed);
        let f = ChargingMatrix::build(&inst);
        let plain = simple_paths(&inst, false);
        let via_depot = simple_paths(&inst, true);
        let size = inst.num_chargers();
        for i in 0..size {
            for j in 0..size {
                let split = f.dist(i, 0) + f.dist(0, j);
                // best depot-visiting walk: its halves are independent shortest paths
                let walk = plain[i][0] + plain[0][j];
                assert!(close(split, walk), "seed {seed} ({i},{j}): {split} vs {walk}");
                // a simple depot-visiting path is one such walk, so never shorter
                if via_depot[i][j].is_finite() {
                    assert!(split <= via_depot[i][j] * (1.0 + 1e-12));
                }
            }
        }
    }
}

#[test]
fn isolated_station_row_is_infinite() {
    let inst = Instance::new(
        "iso",
        Point::new(0.0, 0.0),
        vec![],
        vec![Point::new(1.0, 0.0), Point::new(100.0, 0.0)],
        1.0,
        2.0,
        1.0,
    )
    .unwrap();
    let f = ChargingMatrix::build(&inst);
    for j in 0..3 {
        assert_eq!(f.dist(2, j).is_finite(), j == 2);
        assert_eq!(f.dist(j, 2).is_finite(), j == 2);
    }
}
