#![allow(dead_code)]

use fpscp::model::{Customer, Instance, Point};
use fpscp::permgen::{uniform_random, SplitMix64};
use fpscp::{NodeId, Permutation};

/// Random tiny instance on the unit square: 1..=max_n customers, 0..=max_m
/// stations, battery and cargo drawn so that charging and splitting both matter.
pub fn tiny_instance(seed: u64, max_n: usize, max_m: usize) -> Instance {
    let mut rng = SplitMix64::new(seed);
    let n = 1 + rng.below(max_n as u64) as usize;
    let m = rng.below(max_m as u64 + 1) as usize;
    let point = |rng: &mut SplitMix64| Point::new(rng.next_f64(), rng.next_f64());
    let depot = point(&mut rng);
    let customers = (0..n)
        .map(|_| Customer {
            position: point(&mut rng),
            demand: 1.0 + (rng.below(10) as f64),
        })
        .collect();
    let stations = (0..m).map(|_| point(&mut rng)).collect();
    let battery = 0.5 + 1.2 * rng.next_f64();
    let cargo = 10.0 + (rng.below(21) as f64);
    let consumption = 0.8 + 0.4 * rng.next_f64();
    Instance::new(
        format!("tiny-{seed}"),
        depot,
        customers,
        stations,
        cargo,
        battery,
        consumption,
    )
    .expect("valid parameters")
}

pub fn tiny_permutation(instance: &Instance, seed: u64) -> Permutation {
    uniform_random(instance.num_customers(), seed ^ 0x5eed)
}

pub fn close(a: f64, b: f64, rtol: f64) -> bool {
    (a - b).abs() <= rtol * a.abs().max(b.abs()).max(1e-300)
}

/// Customers and stations on the x axis, depot at the origin.
pub fn on_line(customers: &[(f64, f64)], stations: &[f64], cargo: f64, battery: f64) -> Instance {
    Instance::new(
        "line",
        Point::new(0.0, 0.0),
        customers
            .iter()
            .map(|&(x, demand)| Customer {
                position: Point::new(x, 0.0),
                demand,
            })
            .collect(),
        stations.iter().map(|&x| Point::new(x, 0.0)).collect(),
        cargo,
        battery,
        1.0,
    )
    .unwrap()
}

/// Minimum over all 2^(n-1) ways of cutting the order into consecutive routes.
pub fn cut_brute_force(inst: &Instance, perm: &Permutation) -> Option<f64> {
    let order = perm.order();
    let n = order.len();
    let mut best: Option<f64> = None;
    for mask in 0u32..(1 << (n - 1)) {
        let mut routes: Vec<Vec<usize>> = vec![vec![order[0]]];
        for (i, &c) in order.iter().enumerate().skip(1) {
            if mask & (1 << (i - 1)) != 0 {
                routes.push(Vec::new());
            }
            routes.last_mut().unwrap().push(c);
        }
        let fits = routes
            .iter()
            .all(|r| inst.fits_cargo(r.iter().map(|&c| inst.demand(NodeId::Customer(c))).sum()));
        if !fits {
            continue;
        }
        // per route: first leg + inner legs (left to right) + last leg, then routes in order
        let mut total = 0.0;
        for r in &routes {
            let mut inner = 0.0;
            for w in r.windows(2) {
                inner += inst.dist(NodeId::Customer(w[0]), NodeId::Customer(w[1]));
            }
            let first = NodeId::Customer(r[0]);
            let last = NodeId::Customer(r[r.len() - 1]);
            total += inst.dist(NodeId::Depot, first) + inner + inst.dist(last, NodeId::Depot);
        }
        if best.is_none_or(|b| total < b) {
            best = Some(total);
        }
    }
    best
}
