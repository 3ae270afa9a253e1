//! All-pairs shortest paths among chargers (depot and stations).
//!
//! Two chargers are adjacent when a fully charged vehicle can drive between
//! them, i.e. `h * d(u, v) <= B`. Since the battery is restored at every
//! charger, any path in that graph is energy-feasible, so the cheapest way to
//! get from one charger to another while only stopping at chargers is a plain
//! shortest path.

use thiserror::Error;

use crate::model::{Instance, NodeId};

#[derive(Debug, Error, PartialEq, Eq)]
#[error("charger {to} is unreachable from charger {from}")]
pub struct Unreachable {
    pub from: usize,
    pub to: usize,
}

const NO_HOP: u32 = u32::MAX;

/// Shortest-path distances and next hops over chargers `0..=m` (0 is the depot).
///
/// Unreachable pairs hold `f64::INFINITY`; it is only ever compared, never added.
#[derive(Debug, Clone, PartialEq)]
pub struct ChargingMatrix {
    size: usize,
    dist: Vec<f64>,
    next: Vec<u32>,
}

impl ChargingMatrix {
    /// Floyd–Warshall over the battery-reachability graph in `O((m+1)^3)`.
    ///
    /// Only strict improvements are accepted, so among equally short paths the
    /// one found first in the fixed node order (depot, then stations by index) wins.
    pub fn build(instance: &Instance) -> Self {
        let size = instance.num_chargers();
        let mut dist = vec![f64::INFINITY; size * size];
        let mut next = vec![NO_HOP; size * size];
        for i in 0..size {
            dist[i * size + i] = 0.0;
            next[i * size + i] = i as u32;
            for j in (i + 1)..size {
                let (a, b) = (instance.charger(i), instance.charger(j));
                if instance.fits_battery(instance.energy(a, b)) {
                    let d = instance.dist(a, b);
                    dist[i * size + j] = d;
                    dist[j * size + i] = d;
                    next[i * size + j] = j as u32;
                    next[j * size + i] = i as u32;
                }
            }
        }
        for k in 0..size {
            for i in 0..size {
                let dik = dist[i * size + k];
                if !dik.is_finite() {
                    continue;
                }
                for j in 0..size {
                    let dkj = dist[k * size + j];
                    if !dkj.is_finite() {
                        continue;
                    }
                    let through = dik + dkj;
                    if through < dist[i * size + j] {
                        dist[i * size + j] = through;
                        next[i * size + j] = next[i * size + k];
                    }
                }
            }
        }
        ChargingMatrix { size, dist, next }
    }

    /// Number of chargers, `m + 1`.
    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn dist(&self, from: usize, to: usize) -> f64 {
        self.dist[from * self.size + to]
    }

    #[inline]
    pub fn reachable(&self, from: usize, to: usize) -> bool {
        self.dist(from, to).is_finite()
    }

    pub fn next_hop(&self, from: usize, to: usize) -> Option<usize> {
        match self.next[from * self.size + to] {
            NO_HOP => None,
            h => Some(h as usize),
        }
    }

    /// Charger indices along one shortest path, both endpoints included.
    pub fn reconstruct_path(&self, from: usize, to: usize) -> Result<Vec<usize>, Unreachable> {
        if !self.reachable(from, to) {
            return Err(Unreachable { from, to });
        }
        let mut path = vec![from];
        let mut cur = from;
        while cur != to {
            cur = self
                .next_hop(cur, to)
                .expect("finite distance implies a next hop");
            path.push(cur);
        }
        Ok(path)
    }

    /// Like [`reconstruct_path`](Self::reconstruct_path) but mapped to graph nodes.
    pub fn path_nodes(
        &self,
        instance: &Instance,
        from: usize,
        to: usize,
    ) -> Result<Vec<NodeId>, Unreachable> {
        Ok(self
            .reconstruct_path(from, to)?
            .into_iter()
            .map(|k| instance.charger(k))
            .collect())
    }
}
