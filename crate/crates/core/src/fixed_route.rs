//! Charging insertion on routes that are already fixed by a split.
//!
//! Cargo is settled by the split, so labels only track `(distance, battery)`.
//! The depot positions of the plan are kept and the battery counter resets
//! there. Two move sets are offered:
//!
//! * [`fr_fla_decode`]: direct hop or any charger chain `entry -> ... -> exit`,
//!   costed with the [`ChargingMatrix`]. Optimal for this fixed-route problem.
//! * [`ss_fr_fla_decode`]: direct hop or a single intermediate charger.

use std::time::Instant;

use crate::charging::ChargingMatrix;
use crate::model::{
    prune, DecodeResult, DecodeStats, Front, Instance, NodeId, Outcome, Permutation, Resources, Solution,
};
use crate::split::{split, RoutePlan};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RouteStep {
    Start,
    Direct,
    Charge { entry: usize, exit: usize },
    SingleStation(usize),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RouteLabel {
    pub dist: f64,
    pub battery: f64,
    pub parent: usize,
    pub step: RouteStep,
}

impl Resources for RouteLabel {
    fn resources(&self) -> [f64; 3] {
        [self.dist, 0.0, self.battery]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FixedRouteOptions {
    pub prune: bool,
    /// Whether the single-stop variant may use the depot as its charger.
    pub allow_depot_as_station: bool,
}

impl Default for FixedRouteOptions {
    fn default() -> Self {
        FixedRouteOptions {
            prune: true,
            allow_depot_as_station: true,
        }
    }
}

enum Moves<'a> {
    Chains(&'a ChargingMatrix),
    SingleStop { allow_depot: bool },
}

/// Optimal charging insertion for a fixed route plan.
pub fn fr_fla_decode(instance: &Instance, matrix: &ChargingMatrix, plan: &RoutePlan) -> DecodeResult {
    fr_fla_decode_with(instance, matrix, plan, FixedRouteOptions::default())
}

pub fn fr_fla_decode_with(
    instance: &Instance,
    matrix: &ChargingMatrix,
    plan: &RoutePlan,
    options: FixedRouteOptions,
) -> DecodeResult {
    run(instance, plan, Moves::Chains(matrix), options, true).1
}

/// Optimal charged distance of `plan` without building the node sequence.
pub fn fr_fla_distance(instance: &Instance, matrix: &ChargingMatrix, plan: &RoutePlan) -> Option<f64> {
    let options = FixedRouteOptions::default();
    run(instance, plan, Moves::Chains(matrix), options, false).0
}

pub fn ss_fr_fla_distance(instance: &Instance, plan: &RoutePlan, options: FixedRouteOptions) -> Option<f64> {
    let moves = Moves::SingleStop {
        allow_depot: options.allow_depot_as_station,
    };
    run(instance, plan, moves, options, false).0
}

/// Charging insertion allowing at most one charger between consecutive nodes.
pub fn ss_fr_fla_decode(instance: &Instance, plan: &RoutePlan) -> DecodeResult {
    ss_fr_fla_decode_with(instance, plan, FixedRouteOptions::default())
}

pub fn ss_fr_fla_decode_with(
    instance: &Instance,
    plan: &RoutePlan,
    options: FixedRouteOptions,
) -> DecodeResult {
    run(
        instance,
        plan,
        Moves::SingleStop {
            allow_depot: options.allow_depot_as_station,
        },
        options,
        true,
    )
    .1
}

/// Split, then optimal fixed-route charging. Timing covers both phases.
pub fn split_then_fr_fla(
    instance: &Instance,
    matrix: &ChargingMatrix,
    permutation: &Permutation,
) -> DecodeResult {
    timed_split(instance, permutation, |plan| {
        fr_fla_decode(instance, matrix, plan)
    })
}

/// Split, then single-stop charging. Timing covers both phases.
pub fn split_then_ss_fr_fla(
    instance: &Instance,
    permutation: &Permutation,
    options: FixedRouteOptions,
) -> DecodeResult {
    timed_split(instance, permutation, |plan| {
        ss_fr_fla_decode_with(instance, plan, options)
    })
}

fn timed_split(
    instance: &Instance,
    permutation: &Permutation,
    charge: impl FnOnce(&RoutePlan) -> DecodeResult,
) -> DecodeResult {
    let start = Instant::now();
    let mut result = match split(instance, permutation) {
        Some(plan) => charge(&plan),
        None => DecodeResult {
            outcome: Outcome::Infeasible,
            stats: DecodeStats::default(),
        },
    };
    result.stats.elapsed = start.elapsed();
    result
}

fn run(
    instance: &Instance,
    plan: &RoutePlan,
    moves: Moves<'_>,
    options: FixedRouteOptions,
    reconstruct: bool,
) -> (Option<f64>, DecodeResult) {
    let start = Instant::now();
    let walk = plan.node_walk();
    let h = instance.consumption_rate();
    let chargers = instance.num_chargers();
    let mut stats = DecodeStats {
        max_front: 1,
        ..DecodeStats::default()
    };
    let mut fronts: Vec<Front<RouteLabel>> = vec![Front::single(RouteLabel {
        dist: 0.0,
        battery: 0.0,
        parent: 0,
        step: RouteStep::Start,
    })];

    for i in 1..walk.len() {
        let (from, to) = (walk[i - 1], walk[i]);
        let direct = instance.dist(from, to);
        let entry_dist: Vec<f64> = (0..chargers)
            .map(|k| instance.dist(from, instance.charger(k)))
            .collect();
        let exit_dist: Vec<f64> = (0..chargers)
            .map(|k| instance.dist(instance.charger(k), to))
            .collect();
        let exits: Vec<usize> = (0..chargers)
            .filter(|&k| instance.fits_battery(h * exit_dist[k]))
            .collect();

        let mut candidates = Vec::new();
        for (parent, label) in fronts[i - 1].iter().enumerate() {
            let before = candidates.len();
            let battery = label.battery + h * direct;
            if instance.fits_battery(battery) {
                candidates.push(RouteLabel {
                    dist: label.dist + direct,
                    battery,
                    parent,
                    step: RouteStep::Direct,
                });
            }
            match moves {
                Moves::Chains(f) => {
                    for (entry, &to_entry) in entry_dist.iter().enumerate() {
                        if !instance.fits_battery(label.battery + h * to_entry) {
                            continue;
                        }
                        let base = label.dist + to_entry;
                        for &exit in &exits {
                            if f.reachable(entry, exit) {
                                candidates.push(RouteLabel {
                                    dist: base + f.dist(entry, exit) + exit_dist[exit],
                                    battery: h * exit_dist[exit],
                                    parent,
                                    step: RouteStep::Charge { entry, exit },
                                });
                            }
                        }
                    }
                }
                Moves::SingleStop { allow_depot } => {
                    let first = if allow_depot { 0 } else { 1 };
                    for &stop in exits.iter().filter(|&&k| k >= first) {
                        if instance.fits_battery(label.battery + h * entry_dist[stop]) {
                            candidates.push(RouteLabel {
                                dist: label.dist + entry_dist[stop] + exit_dist[stop],
                                battery: h * exit_dist[stop],
                                parent,
                                step: RouteStep::SingleStation(stop),
                            });
                        }
                    }
                }
            }
            stats.max_branching = stats.max_branching.max(candidates.len() - before);
        }

        if to == NodeId::Depot {
            for c in &mut candidates {
                c.battery = 0.0;
            }
        }
        let produced = candidates.len();
        stats.generated += produced;
        let front = if options.prune {
            prune(candidates)
        } else {
            Front::unpruned(candidates)
        };
        stats.pruned += produced - front.len();
        stats.max_front = stats.max_front.max(front.len());
        let empty = front.is_empty();
        fronts.push(front);
        if empty {
            break;
        }
    }

    let last = fronts.last().expect("root front");
    let best = last
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.dist.total_cmp(&b.1.dist))
        .map(|(i, l)| (i, l.dist));
    let outcome = match best {
        Some((idx, dist)) if reconstruct => {
            let sequence = backtrack(instance, &moves, &walk, &fronts, idx);
            Outcome::Solved(Solution::from_walk(sequence, dist))
        }
        _ => Outcome::Infeasible,
    };
    stats.elapsed = start.elapsed();
    (best.map(|b| b.1), DecodeResult { outcome, stats })
}

fn backtrack(
    instance: &Instance,
    moves: &Moves<'_>,
    walk: &[NodeId],
    fronts: &[Front<RouteLabel>],
    best: usize,
) -> Vec<NodeId> {
    let mut pieces = Vec::with_capacity(walk.len());
    let mut idx = best;
    for i in (1..walk.len()).rev() {
        let label = fronts[i].labels()[idx];
        let mut piece = match (label.step, moves) {
            (RouteStep::Charge { entry, exit }, Moves::Chains(f)) => f
                .path_nodes(instance, entry, exit)
                .expect("label used a finite path"),
            (RouteStep::SingleStation(k), _) => vec![instance.charger(k)],
            _ => Vec::new(),
        };
        piece.push(walk[i]);
        pieces.push(piece);
        idx = label.parent;
    }
    let mut sequence = vec![NodeId::Depot];
    for piece in pieces.into_iter().rev() {
        sequence.extend(piece);
    }
    sequence
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{validate, Customer, Point};

    /// Depot at the origin, one customer at `(x, 0)`, chargers at the given points.
    fn corridor(x: f64, stations: &[(f64, f64)], battery: f64) -> Instance {
        Instance::new(
            "corridor",
            Point::new(0.0, 0.0),
            vec![Customer {
                position: Point::new(x, 0.0),
                demand: 1.0,
            }],
            stations.iter().map(|&(x, y)| Point::new(x, y)).collect(),
            10.0,
            battery,
            1.0,
        )
        .unwrap()
    }

    fn plan(inst: &Instance) -> RoutePlan {
        split(inst, &Permutation::identity(inst.num_customers())).unwrap()
    }

    #[test]
    fn no_charging_needed() {
        let inst = corridor(10.0, &[(5.0, 3.0)], 25.0);
        let p = plan(&inst);
        let f = ChargingMatrix::build(&inst);
        let fr = fr_fla_decode(&inst, &f, &p);
        let ss = ss_fr_fla_decode(&inst, &p);
        assert_eq!(fr.distance(), Some(20.0));
        assert_eq!(fr.outcome, ss.outcome);
        assert_eq!(fr.solution().unwrap().stations_visited(), 0);
    }

    #[test]
    fn chained_stations_need_multi_stop() {
        // B = 4: D -> S1 -> S2 -> C -> S2 -> S1 -> D, no single charger bridges a leg
        let inst = corridor(8.5, &[(10.0 / 3.0, 0.0), (20.0 / 3.0, 0.0)], 4.0);
        let p = plan(&inst);
        let f = ChargingMatrix::build(&inst);
        let fr = fr_fla_decode(&inst, &f, &p);
        let perm = Permutation::identity(1);
        let sol = fr.solution().expect("solvable with two stations per leg");
        assert!((sol.total_distance - 17.0).abs() < 1e-9);
        assert_eq!(validate(&inst, &perm, sol), Ok(()));
        assert_eq!(sol.stations_visited(), 4);
        assert!(!ss_fr_fla_decode(&inst, &p).is_solved());
    }

    #[test]
    fn depot_as_single_stop_switch() {
        // customers at x = 3 and x = -3 in one route; B = 6 forces a stop at the depot
        let inst = Instance::new(
            "v",
            Point::new(0.0, 0.0),
            vec![
                Customer {
                    position: Point::new(3.0, 0.0),
                    demand: 1.0,
                },
                Customer {
                    position: Point::new(-3.0, 0.0),
                    demand: 1.0,
                },
            ],
            vec![],
            10.0,
            6.0,
            1.0,
        )
        .unwrap();
        let p = RoutePlan {
            routes: vec![vec![0, 1]],
            total_distance: 12.0,
        };
        let on = ss_fr_fla_decode(&inst, &p);
        assert_eq!(on.distance(), Some(12.0));
        let off = ss_fr_fla_decode_with(
            &inst,
            &p,
            FixedRouteOptions {
                allow_depot_as_station: false,
                ..Default::default()
            },
        );
        assert!(!off.is_solved());
    }
}
