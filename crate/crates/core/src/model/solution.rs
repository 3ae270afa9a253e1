use std::fmt;
use std::time::Duration;

use super::instance::{Instance, NodeId, Permutation};

/// A complete decoding: a closed walk from the depot back to the depot.
#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub sequence: Vec<NodeId>,
    pub total_distance: f64,
}

impl Solution {
    /// Builds a solution, dropping consecutive repeats of the same node
    /// (zero-length hops that carry no information).
    pub fn from_walk(mut sequence: Vec<NodeId>, total_distance: f64) -> Self {
        sequence.dedup();
        Solution {
            sequence,
            total_distance,
        }
    }

    /// Depot-delimited routes, each starting and ending with the depot.
    pub fn routes(&self) -> Vec<&[NodeId]> {
        let mut out = Vec::new();
        let mut start = None;
        for (i, &node) in self.sequence.iter().enumerate() {
            if node == NodeId::Depot {
                if let Some(s) = start {
                    if i > s {
                        out.push(&self.sequence[s..=i]);
                    }
                }
                start = Some(i);
            }
        }
        out
    }

    pub fn customer_order(&self) -> Vec<usize> {
        self.sequence
            .iter()
            .filter_map(|n| match n {
                NodeId::Customer(c) => Some(*c),
                _ => None,
            })
            .collect()
    }

    pub fn stations_visited(&self) -> usize {
        self.sequence
            .iter()
            .filter(|n| matches!(n, NodeId::Station(_)))
            .count()
    }

    /// Sum of hop lengths, recomputed from coordinates.
    pub fn walk_length(&self, instance: &Instance) -> f64 {
        self.sequence.windows(2).map(|w| instance.dist(w[0], w[1])).sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Outcome {
    Solved(Solution),
    Infeasible,
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct DecodeStats {
    /// Largest front kept after pruning, over all positions.
    pub max_front: usize,
    /// Feasible candidate labels produced before pruning.
    pub generated: usize,
    /// Candidates discarded by pruning.
    pub pruned: usize,
    /// Largest number of feasible candidates spawned by one predecessor label.
    pub max_branching: usize,
    pub elapsed: Duration,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecodeResult {
    pub outcome: Outcome,
    pub stats: DecodeStats,
}

impl DecodeResult {
    pub fn solution(&self) -> Option<&Solution> {
        match &self.outcome {
            Outcome::Solved(s) => Some(s),
            Outcome::Infeasible => None,
        }
    }

    pub fn distance(&self) -> Option<f64> {
        self.solution().map(|s| s.total_distance)
    }

    pub fn is_solved(&self) -> bool {
        self.solution().is_some()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    Empty,
    StartNotDepot,
    EndNotDepot,
    UnknownNode {
        position: usize,
        node: NodeId,
    },
    /// Customers with the non-customer nodes removed do not reproduce the permutation.
    OrderBroken {
        expected: Vec<usize>,
        found: Vec<usize>,
    },
    CapacityExceeded {
        position: usize,
        load: f64,
    },
    BatteryExceeded {
        position: usize,
        used: f64,
    },
    DistanceMismatch {
        reported: f64,
        recomputed: f64,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Empty => write!(f, "empty sequence"),
            Violation::StartNotDepot => write!(f, "sequence does not start at the depot"),
            Violation::EndNotDepot => write!(f, "sequence does not end at the depot"),
            Violation::UnknownNode { position, node } => {
                write!(f, "node {node} at position {position} is not in the instance")
            }
            Violation::OrderBroken { .. } => write!(f, "customer order differs from permutation"),
            Violation::CapacityExceeded { position, load } => {
                write!(f, "cargo {load} exceeds capacity at position {position}")
            }
            Violation::BatteryExceeded { position, used } => {
                write!(f, "battery use {used} exceeds capacity at position {position}")
            }
            Violation::DistanceMismatch { reported, recomputed } => {
                write!(f, "reported distance {reported} but walk is {recomputed}")
            }
        }
    }
}

const DISTANCE_RTOL: f64 = 1e-9;

/// Recomputes every trace from scratch and reports all violated constraints.
///
/// Cargo accumulates per depot-delimited route. Battery use resets when the
/// vehicle leaves the depot or a station and accumulates when it leaves a
/// customer. Reported distance must match the walk length within `1e-9` relative.
pub fn validate(
    instance: &Instance,
    permutation: &Permutation,
    solution: &Solution,
) -> Result<(), Vec<Violation>> {
    let seq = &solution.sequence;
    let mut violations = Vec::new();
    if seq.is_empty() {
        return Err(vec![Violation::Empty]);
    }
    if seq[0] != NodeId::Depot {
        violations.push(Violation::StartNotDepot);
    }
    if seq[seq.len() - 1] != NodeId::Depot {
        violations.push(Violation::EndNotDepot);
    }
    for (position, &node) in seq.iter().enumerate() {
        if !instance.contains(node) {
            violations.push(Violation::UnknownNode { position, node });
        }
    }
    if !violations.is_empty() {
        return Err(violations);
    }

    let found = solution.customer_order();
    if found != permutation.order() {
        violations.push(Violation::OrderBroken {
            expected: permutation.order().to_vec(),
            found,
        });
    }

    let mut load = 0.0;
    let mut used = 0.0;
    let mut walked = 0.0;
    let mut cargo_flagged = false;
    for t in 1..seq.len() {
        let (prev, node) = (seq[t - 1], seq[t]);
        let hop = instance.dist(prev, node);
        walked += hop;
        let draw = instance.consumption_rate() * hop;
        used = if prev.is_charger() { draw } else { used + draw };
        if !instance.fits_battery(used) {
            violations.push(Violation::BatteryExceeded { position: t, used });
        }
        if node == NodeId::Depot {
            load = 0.0;
            cargo_flagged = false;
        } else {
            load += instance.demand(node);
            if !cargo_flagged && !instance.fits_cargo(load) {
                violations.push(Violation::CapacityExceeded { position: t, load });
                cargo_flagged = true;
            }
        }
    }

    let reported = solution.total_distance;
    let scale = walked.abs().max(f64::MIN_POSITIVE);
    // written so that a NaN distance also fails
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    let off = !((reported - walked).abs() <= DISTANCE_RTOL * scale);
    if off {
        violations.push(Violation::DistanceMismatch {
            reported,
            recomputed: walked,
        });
    }

    if violations.is_empty() {
        Ok(())
    } else {
        Err(violations)
    }
}
