//! Exact joint decoding: route splitting and charging decided together.
//!
//! The decoder walks `depot, pi_1, ..., pi_n, depot` and keeps, after every
//! position, the Pareto front of `(distance, cargo since depot, battery since
//! last charger)` labels. Each label is extended to the next node by
//!
//! * a direct hop,
//! * a charging detour `entry -> ... -> exit` through chargers, costed with the
//!   precomputed [`ChargingMatrix`] (the depot counts as a charger here but its
//!   cargo reset is ignored),
//! * a depot detour `entry -> ... -> depot -> ... -> exit`, which also empties
//!   the cargo counter.
//!
//! Dominated labels are dropped after each position. The minimum-distance label
//! of the final front is an optimal decoding.

use std::time::Instant;

use rayon::prelude::*;

use crate::charging::ChargingMatrix;
use crate::model::{
    prune, DecodeResult, DecodeStats, Extension, Front, Instance, Label, NodeId, Outcome, Permutation,
    Solution,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct JointOptions {
    /// Drop dominated labels after every position. Turning this off keeps every
    /// feasible label and is exponential; it exists for cross-checking.
    pub prune: bool,
    /// Skip charging detours that pass through the depot when the matching
    /// depot detour is feasible, since the latter always dominates them.
    pub skip_depot_charges: bool,
}

impl Default for JointOptions {
    fn default() -> Self {
        JointOptions {
            prune: true,
            skip_depot_charges: false,
        }
    }
}

/// Joint decoder bound to one instance and its charging matrix.
#[derive(Debug, Clone, Copy)]
pub struct JointDecoder<'a> {
    instance: &'a Instance,
    matrix: &'a ChargingMatrix,
    options: JointOptions,
}

/// Per-step costs that do not depend on the label being extended.
struct Step {
    demand: f64,
    direct_dist: f64,
    direct_energy: f64,
    entry_dist: Vec<f64>,
    entry_energy: Vec<f64>,
    exit_dist: Vec<f64>,
    exit_energy: Vec<f64>,
    /// Chargers from which a full battery reaches the target.
    exits: Vec<usize>,
}

/// Cheapest entry per exit, indexed by how many entries (in energy order) a label can reach.
struct EntryTable {
    thresholds: Vec<f64>,
    charge: Vec<Vec<Option<(f64, usize)>>>,
    detour: Vec<Option<(f64, usize)>>,
}

impl EntryTable {
    fn reach(&self, instance: &Instance, battery: f64) -> usize {
        self.thresholds
            .partition_point(|&e| instance.fits_battery(battery + e))
    }
}

impl<'a> JointDecoder<'a> {
    pub fn new(instance: &'a Instance, matrix: &'a ChargingMatrix) -> Self {
        Self::with_options(instance, matrix, JointOptions::default())
    }

    pub fn with_options(instance: &'a Instance, matrix: &'a ChargingMatrix, options: JointOptions) -> Self {
        debug_assert_eq!(matrix.size(), instance.num_chargers());
        JointDecoder {
            instance,
            matrix,
            options,
        }
    }

    pub fn decode(&self, permutation: &Permutation) -> DecodeResult {
        let start = Instant::now();
        let walk = walk(permutation);
        let (fronts, mut stats) = self.label(&walk);
        let last = fronts.last().expect("at least the root front");
        let outcome = match best_index(last.labels()) {
            Some(best) => Outcome::Solved(self.reconstruct(&walk, &fronts, best)),
            None => Outcome::Infeasible,
        };
        stats.elapsed = start.elapsed();
        DecodeResult { outcome, stats }
    }

    /// Optimal distance only; skips rebuilding the node sequence.
    pub fn optimal_distance(&self, permutation: &Permutation) -> Option<f64> {
        let (fronts, _) = self.label(&walk(permutation));
        let last = fronts.last().expect("at least the root front");
        best_index(last.labels()).map(|i| last.labels()[i].dist)
    }

    /// All fronts, position by position (index 0 is the root at the depot).
    pub fn fronts(&self, permutation: &Permutation) -> Vec<Front<Label>> {
        self.label(&walk(permutation)).0
    }

    fn step(&self, from: NodeId, to: NodeId) -> Step {
        let inst = self.instance;
        let h = inst.consumption_rate();
        let size = self.matrix.size();
        let direct_dist = inst.dist(from, to);
        let mut step = Step {
            demand: inst.demand(to),
            direct_dist,
            direct_energy: h * direct_dist,
            entry_dist: Vec::with_capacity(size),
            entry_energy: Vec::with_capacity(size),
            exit_dist: Vec::with_capacity(size),
            exit_energy: Vec::with_capacity(size),
            exits: Vec::with_capacity(size),
        };
        for k in 0..size {
            let f = inst.charger(k);
            let d_in = inst.dist(from, f);
            step.entry_dist.push(d_in);
            step.entry_energy.push(h * d_in);
            let d_out = inst.dist(f, to);
            step.exit_dist.push(d_out);
            step.exit_energy.push(h * d_out);
            if inst.fits_battery(h * d_out) {
                step.exits.push(k);
            }
        }
        step
    }

    fn label(&self, walk: &[NodeId]) -> (Vec<Front<Label>>, DecodeStats) {
        let inst = self.instance;
        let f = self.matrix;
        let mut stats = DecodeStats {
            max_front: 1,
            ..DecodeStats::default()
        };
        let mut fronts = vec![Front::single(Label::root())];
        let mut candidates: Vec<Label> = Vec::new();

        for i in 1..walk.len() {
            let step = self.step(walk[i - 1], walk[i]);
            let depot_cargo_ok = inst.fits_cargo(step.demand);
            let best = self
                .options
                .prune
                .then(|| self.entry_table(&step, depot_cargo_ok));
            let prev = fronts.last().expect("non-empty");
            candidates.clear();

            for (parent, label) in prev.iter().enumerate() {
                let before = candidates.len();
                let cargo = label.cargo + step.demand;
                let cargo_ok = inst.fits_cargo(cargo);

                let battery = label.battery + step.direct_energy;
                if cargo_ok && inst.fits_battery(battery) {
                    candidates.push(Label {
                        dist: label.dist + step.direct_dist,
                        cargo,
                        battery,
                        parent,
                        extension: Extension::Direct,
                    });
                }

                match &best {
                    Some(table) => {
                        let reach = table.reach(inst, label.battery);
                        for &exit in &step.exits {
                            if let (true, Some((cost, entry))) = (cargo_ok, table.charge[reach][exit]) {
                                candidates.push(Label {
                                    dist: label.dist + cost + step.exit_dist[exit],
                                    cargo,
                                    battery: step.exit_energy[exit],
                                    parent,
                                    extension: Extension::Charge { entry, exit },
                                });
                            }
                            if let (true, Some((cost, entry))) = (f.reachable(0, exit), table.detour[reach]) {
                                candidates.push(Label {
                                    dist: label.dist + cost + f.dist(0, exit) + step.exit_dist[exit],
                                    cargo: step.demand,
                                    battery: step.exit_energy[exit],
                                    parent,
                                    extension: Extension::DepotDetour { entry, exit },
                                });
                            }
                        }
                    }
                    None => self.extend_all(
                        label,
                        parent,
                        cargo,
                        cargo_ok,
                        depot_cargo_ok,
                        &step,
                        &mut candidates,
                    ),
                }
                stats.max_branching = stats.max_branching.max(candidates.len() - before);
            }

            let batch = std::mem::take(&mut candidates);
            let produced = batch.len();
            stats.generated += produced;
            let front = if self.options.prune {
                prune(batch)
            } else {
                Front::unpruned(batch)
            };
            stats.pruned += produced - front.len();
            stats.max_front = stats.max_front.max(front.len());
            let empty = front.is_empty();
            fronts.push(front);
            if empty {
                break;
            }
        }
        (fronts, stats)
    }

    /// Every detour of every entry/exit pair, in entry-major order.
    #[allow(clippy::too_many_arguments)]
    fn extend_all(
        &self,
        label: &Label,
        parent: usize,
        cargo: f64,
        cargo_ok: bool,
        depot_cargo_ok: bool,
        step: &Step,
        candidates: &mut Vec<Label>,
    ) {
        let (inst, f) = (self.instance, self.matrix);
        for entry in 0..f.size() {
            if !inst.fits_battery(label.battery + step.entry_energy[entry]) {
                continue;
            }
            let base = label.dist + step.entry_dist[entry];
            let via_depot = depot_cargo_ok && f.reachable(entry, 0);
            for &exit in &step.exits {
                let skip_charge = self.options.skip_depot_charges
                    && (entry == 0 || exit == 0)
                    && via_depot
                    && f.reachable(0, exit);
                if cargo_ok && !skip_charge && f.reachable(entry, exit) {
                    candidates.push(Label {
                        dist: base + f.dist(entry, exit) + step.exit_dist[exit],
                        cargo,
                        battery: step.exit_energy[exit],
                        parent,
                        extension: Extension::Charge { entry, exit },
                    });
                }
                if via_depot && f.reachable(0, exit) {
                    candidates.push(Label {
                        dist: base + f.dist(entry, 0) + f.dist(0, exit) + step.exit_dist[exit],
                        cargo: step.demand,
                        battery: step.exit_energy[exit],
                        parent,
                        extension: Extension::DepotDetour { entry, exit },
                    });
                }
            }
        }
    }

    /// For a fixed exit, detours through different entries give labels that
    /// differ only in distance, so with pruning on only the cheapest reachable
    /// entry matters. Entries are reachable in order of their energy, so the
    /// cheapest entry is tabulated per reachable prefix.
    fn entry_table(&self, step: &Step, depot_cargo_ok: bool) -> EntryTable {
        let f = self.matrix;
        let size = f.size();
        let mut order: Vec<usize> = (0..size).collect();
        order.sort_by(|&a, &b| {
            step.entry_energy[a]
                .total_cmp(&step.entry_energy[b])
                .then(a.cmp(&b))
        });
        let mut charge = vec![vec![None; size]; size + 1];
        let mut detour = vec![None; size + 1];
        let better = |cur: Option<(f64, usize)>, cost: f64, entry: usize| match cur {
            None => true,
            Some((c, e)) => cost < c || (cost == c && entry < e),
        };
        for (p, &entry) in order.iter().enumerate() {
            let mut row = charge[p].clone();
            let via_depot = depot_cargo_ok && f.reachable(entry, 0);
            for &exit in &step.exits {
                let skip = self.options.skip_depot_charges
                    && (entry == 0 || exit == 0)
                    && via_depot
                    && f.reachable(0, exit);
                if !skip && f.reachable(entry, exit) {
                    let cost = step.entry_dist[entry] + f.dist(entry, exit);
                    if better(row[exit], cost, entry) {
                        row[exit] = Some((cost, entry));
                    }
                }
            }
            charge[p + 1] = row;
            let mut d = detour[p];
            if via_depot {
                let cost = step.entry_dist[entry] + f.dist(entry, 0);
                if better(d, cost, entry) {
                    d = Some((cost, entry));
                }
            }
            detour[p + 1] = d;
        }
        let thresholds = order.iter().map(|&e| step.entry_energy[e]).collect();
        EntryTable {
            thresholds,
            charge,
            detour,
        }
    }

    fn reconstruct(&self, walk: &[NodeId], fronts: &[Front<Label>], best: usize) -> Solution {
        let mut segments: Vec<Vec<NodeId>> = Vec::with_capacity(walk.len());
        let mut idx = best;
        let total = fronts[walk.len() - 1].labels()[best].dist;
        for i in (1..walk.len()).rev() {
            let label = fronts[i].labels()[idx];
            segments.push(self.segment(label.extension, walk[i]));
            idx = label.parent;
        }
        let mut sequence = vec![NodeId::Depot];
        for seg in segments.into_iter().rev() {
            sequence.extend(seg);
        }
        Solution::from_walk(sequence, total)
    }

    fn segment(&self, extension: Extension, target: NodeId) -> Vec<NodeId> {
        let (inst, f) = (self.instance, self.matrix);
        let path = |a, b| f.path_nodes(inst, a, b).expect("label used a finite path");
        let mut seg = match extension {
            Extension::Start | Extension::Direct => Vec::new(),
            Extension::Charge { entry, exit } => path(entry, exit),
            Extension::DepotDetour { entry, exit } => {
                let mut p = path(entry, 0);
                p.extend(path(0, exit).into_iter().skip(1));
                p
            }
        };
        seg.push(target);
        seg
    }
}

fn walk(permutation: &Permutation) -> Vec<NodeId> {
    std::iter::once(NodeId::Depot)
        .chain(permutation.order().iter().map(|&c| NodeId::Customer(c)))
        .chain(std::iter::once(NodeId::Depot))
        .collect()
}

/// First label of minimum distance.
fn best_index(labels: &[Label]) -> Option<usize> {
    labels
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.dist.total_cmp(&b.1.dist))
        .map(|(i, _)| i)
}

/// Exact minimum-distance decoding of `permutation`.
pub fn decode(instance: &Instance, matrix: &ChargingMatrix, permutation: &Permutation) -> DecodeResult {
    JointDecoder::new(instance, matrix).decode(permutation)
}

/// Decodes many permutations in parallel; results keep the input order.
pub fn decode_batch(
    instance: &Instance,
    matrix: &ChargingMatrix,
    permutations: &[Permutation],
) -> Vec<DecodeResult> {
    let decoder = JointDecoder::new(instance, matrix);
    permutations.par_iter().map(|p| decoder.decode(p)).collect()
}
