//! Exponential reference decoders for tiny instances.
//!
//! They share nothing with the labeling decoders beyond the instance type: no
//! charging matrix, no dominance. Every gap between consecutive walk nodes is
//! filled with each candidate charger sequence in turn and the resulting walk
//! is simulated hop by hop.
//!
//! Within a gap, stations never repeat between two depot visits and the depot
//! appears at most once; any other repetition closes a cycle that can be cut
//! without losing feasibility or adding distance.

use std::collections::HashMap;
use std::time::Instant;

use thiserror::Error;

use crate::model::{DecodeResult, DecodeStats, Instance, NodeId, Outcome, Permutation, Solution};
use crate::split::RoutePlan;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleBudget {
    pub max_customers: usize,
    pub max_stations: usize,
    /// Cap on simulated gap fillings.
    pub max_expansions: u64,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget {
            max_customers: 7,
            max_stations: 3,
            max_expansions: 50_000_000,
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("{0} customers exceed the oracle budget")]
    TooManyCustomers(usize),
    #[error("{0} stations exceed the oracle budget")]
    TooManyStations(usize),
    #[error("expansion cap of {0} reached")]
    BudgetExceeded(u64),
}

/// Which charger sequences the fixed-route oracle may place in a gap.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GapMoves {
    /// `Some(1)` reproduces the single-stop restriction.
    pub max_stops: Option<usize>,
    pub allow_depot: bool,
}

impl GapMoves {
    pub const UNRESTRICTED: GapMoves = GapMoves {
        max_stops: None,
        allow_depot: true,
    };

    pub fn single_stop(allow_depot: bool) -> Self {
        GapMoves {
            max_stops: Some(1),
            allow_depot,
        }
    }
}

fn check_budget(instance: &Instance, budget: &OracleBudget) -> Result<(), OracleError> {
    if instance.num_customers() > budget.max_customers {
        return Err(OracleError::TooManyCustomers(instance.num_customers()));
    }
    if instance.num_stations() > budget.max_stations {
        return Err(OracleError::TooManyStations(instance.num_stations()));
    }
    Ok(())
}

/// Every ordered selection of distinct stations, the empty one included.
fn station_sequences(m: usize) -> Vec<Vec<NodeId>> {
    fn extend(m: usize, cur: &mut Vec<NodeId>, used: &mut [bool], out: &mut Vec<Vec<NodeId>>) {
        out.push(cur.clone());
        for j in 0..m {
            if !used[j] {
                used[j] = true;
                cur.push(NodeId::Station(j));
                extend(m, cur, used, out);
                cur.pop();
                used[j] = false;
            }
        }
    }
    let mut out = Vec::new();
    extend(m, &mut Vec::new(), &mut vec![false; m], &mut out);
    out
}

/// Gap fillings for the joint problem: station runs, optionally split by one depot visit.
fn joint_fillings(m: usize) -> Vec<Vec<NodeId>> {
    let runs = station_sequences(m);
    let mut out = runs.clone();
    for before in &runs {
        for after in &runs {
            let mut seq = before.clone();
            seq.push(NodeId::Depot);
            seq.extend(after);
            out.push(seq);
        }
    }
    out
}

/// Gap fillings for fixed routes: distinct chargers, depot included if allowed.
fn route_fillings(m: usize, moves: GapMoves) -> Vec<Vec<NodeId>> {
    let mut out = Vec::new();
    for run in station_sequences(m) {
        if moves.max_stops.is_none_or(|k| run.len() <= k) {
            out.push(run.clone());
        }
        if moves.allow_depot && moves.max_stops.is_none_or(|k| run.len() < k) {
            for pos in 0..=run.len() {
                let mut seq = run.clone();
                seq.insert(pos, NodeId::Depot);
                out.push(seq);
            }
        }
    }
    out
}

#[derive(Clone, Copy)]
struct State {
    cargo: f64,
    battery: f64,
}

/// Drives `fill` between `from` and `to`; returns the arrival state and distance.
fn traverse(
    instance: &Instance,
    from: NodeId,
    fill: &[NodeId],
    to: NodeId,
    mut state: State,
    track_cargo: bool,
) -> Option<(State, f64)> {
    let mut cur = from;
    let mut walked = 0.0;
    for &node in fill.iter().chain(std::iter::once(&to)) {
        let hop = instance.dist(cur, node);
        let draw = instance.consumption_rate() * hop;
        state.battery = if cur.is_charger() {
            draw
        } else {
            state.battery + draw
        };
        if !instance.fits_battery(state.battery) {
            return None;
        }
        if track_cargo {
            if node == NodeId::Depot {
                state.cargo = 0.0;
            } else {
                state.cargo += instance.demand(node);
                if !instance.fits_cargo(state.cargo) {
                    return None;
                }
            }
        }
        walked += hop;
        cur = node;
    }
    Some((state, walked))
}

struct Search<'a> {
    instance: &'a Instance,
    walk: Vec<NodeId>,
    fillings: Vec<Vec<NodeId>>,
    track_cargo: bool,
    memo: HashMap<(usize, u64, u64), Option<(f64, usize)>>,
    expansions: u64,
    cap: u64,
}

impl Search<'_> {
    /// Cheapest completion from walk position `g` in `state`, with the filling used next.
    fn best(&mut self, g: usize, state: State) -> Result<Option<(f64, usize)>, OracleError> {
        if g + 1 == self.walk.len() {
            return Ok(Some((0.0, usize::MAX)));
        }
        let key = (g, state.cargo.to_bits(), state.battery.to_bits());
        if let Some(&hit) = self.memo.get(&key) {
            return Ok(hit);
        }
        let mut best: Option<(f64, usize)> = None;
        for f in 0..self.fillings.len() {
            self.expansions += 1;
            if self.expansions > self.cap {
                return Err(OracleError::BudgetExceeded(self.cap));
            }
            let Some((next, walked)) = traverse(
                self.instance,
                self.walk[g],
                &self.fillings[f],
                self.walk[g + 1],
                state,
                self.track_cargo,
            ) else {
                continue;
            };
            if let Some((rest, _)) = self.best(g + 1, next)? {
                let total = walked + rest;
                if best.is_none_or(|(b, _)| total < b) {
                    best = Some((total, f));
                }
            }
        }
        self.memo.insert(key, best);
        Ok(best)
    }

    fn solve(mut self) -> Result<Outcome, OracleError> {
        let root = State {
            cargo: 0.0,
            battery: 0.0,
        };
        if self.best(0, root)?.is_none() {
            return Ok(Outcome::Infeasible);
        }
        let mut sequence = vec![NodeId::Depot];
        let mut state = root;
        for g in 0..self.walk.len() - 1 {
            let key = (g, state.cargo.to_bits(), state.battery.to_bits());
            let (_, f) = self.memo[&key].expect("optimal path stays feasible");
            let fill = &self.fillings[f];
            state = traverse(
                self.instance,
                self.walk[g],
                fill,
                self.walk[g + 1],
                state,
                self.track_cargo,
            )
            .expect("replayed filling is feasible")
            .0;
            sequence.extend(fill.iter().copied());
            sequence.push(self.walk[g + 1]);
        }
        let mut solution = Solution::from_walk(sequence, 0.0);
        solution.total_distance = solution.walk_length(self.instance);
        Ok(Outcome::Solved(solution))
    }
}

fn finish(start: Instant, outcome: Outcome) -> DecodeResult {
    DecodeResult {
        outcome,
        stats: DecodeStats {
            elapsed: start.elapsed(),
            ..DecodeStats::default()
        },
    }
}

/// Exhaustive joint decoding with memoised search over exact `(position, cargo, battery)` states.
pub fn brute_fpscp(
    instance: &Instance,
    permutation: &Permutation,
    budget: &OracleBudget,
) -> Result<DecodeResult, OracleError> {
    check_budget(instance, budget)?;
    let start = Instant::now();
    let walk = std::iter::once(NodeId::Depot)
        .chain(permutation.order().iter().map(|&c| NodeId::Customer(c)))
        .chain(std::iter::once(NodeId::Depot))
        .collect();
    let search = Search {
        instance,
        walk,
        fillings: joint_fillings(instance.num_stations()),
        track_cargo: true,
        memo: HashMap::new(),
        expansions: 0,
        cap: budget.max_expansions,
    };
    Ok(finish(start, search.solve()?))
}

/// Exhaustive charging insertion on a fixed route plan.
pub fn brute_frvcp(
    instance: &Instance,
    plan: &RoutePlan,
    moves: GapMoves,
    budget: &OracleBudget,
) -> Result<DecodeResult, OracleError> {
    check_budget(instance, budget)?;
    let start = Instant::now();
    let search = Search {
        instance,
        walk: plan.node_walk(),
        fillings: route_fillings(instance.num_stations(), moves),
        track_cargo: false,
        memo: HashMap::new(),
        expansions: 0,
        cap: budget.max_expansions,
    };
    Ok(finish(start, search.solve()?))
}

/// Plain recursive enumeration of complete walks, checked once at the leaves.
///
/// A second, memo-free route to the joint optimum for cross-validating
/// [`brute_fpscp`]; only usable on the very smallest instances.
pub fn brute_fpscp_plain(
    instance: &Instance,
    permutation: &Permutation,
    budget: &OracleBudget,
) -> Result<Option<f64>, OracleError> {
    check_budget(instance, budget)?;
    let walk: Vec<NodeId> = std::iter::once(NodeId::Depot)
        .chain(permutation.order().iter().map(|&c| NodeId::Customer(c)))
        .chain(std::iter::once(NodeId::Depot))
        .collect();
    let fillings = joint_fillings(instance.num_stations());
    let mut leaves = 0u64;
    let mut best: Option<f64> = None;
    let mut choice = vec![0usize; walk.len() - 1];
    loop {
        leaves += 1;
        if leaves > budget.max_expansions {
            return Err(OracleError::BudgetExceeded(budget.max_expansions));
        }
        let mut seq = vec![NodeId::Depot];
        for (g, &f) in choice.iter().enumerate() {
            seq.extend(fillings[f].iter().copied());
            seq.push(walk[g + 1]);
        }
        if let Some(d) = simulate_walk(instance, &seq) {
            if best.is_none_or(|b| d < b) {
                best = Some(d);
            }
        }
        // odometer increment over the gap choices
        let mut g = 0;
        loop {
            if g == choice.len() {
                return Ok(best);
            }
            choice[g] += 1;
            if choice[g] < fillings.len() {
                break;
            }
            choice[g] = 0;
            g += 1;
        }
    }
}

fn simulate_walk(instance: &Instance, seq: &[NodeId]) -> Option<f64> {
    let mut total = 0.0;
    let mut route_load = 0.0;
    let mut since_charge = 0.0;
    for pair in seq.windows(2) {
        let hop = instance.dist(pair[0], pair[1]);
        if pair[0].is_charger() {
            since_charge = 0.0;
        }
        since_charge += instance.consumption_rate() * hop;
        if pair[1] == NodeId::Depot {
            route_load = 0.0;
        }
        route_load += instance.demand(pair[1]);
        if !instance.fits_battery(since_charge) || !instance.fits_cargo(route_load) {
            return None;
        }
        total += hop;
    }
    Some(total)
}
