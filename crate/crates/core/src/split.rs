//! Optimal capacity-constrained split of a giant tour into depot-delimited
//! routes, ignoring the battery.

use crate::model::{Instance, NodeId, Permutation};

/// Routes obtained by cutting a permutation into consecutive segments.
#[derive(Debug, Clone, PartialEq)]
pub struct RoutePlan {
    pub routes: Vec<Vec<usize>>,
    /// Depot legs included, no stations.
    pub total_distance: f64,
}

impl RoutePlan {
    /// `depot, r1..., depot, r2..., depot, ...` as graph nodes.
    pub fn node_walk(&self) -> Vec<NodeId> {
        let mut walk = vec![NodeId::Depot];
        for route in &self.routes {
            walk.extend(route.iter().map(|&c| NodeId::Customer(c)));
            walk.push(NodeId::Depot);
        }
        walk
    }
}

/// Cost of serving `route` in order as one depot-to-depot trip.
pub fn route_distance(instance: &Instance, route: &[usize]) -> f64 {
    let Some((&first, _)) = route.split_first() else {
        return 0.0;
    };
    let last = *route.last().expect("non-empty");
    let inner: f64 = route
        .windows(2)
        .map(|w| instance.dist(NodeId::Customer(w[0]), NodeId::Customer(w[1])))
        .sum();
    instance.dist(NodeId::Depot, NodeId::Customer(first))
        + inner
        + instance.dist(NodeId::Customer(last), NodeId::Depot)
}

/// Shortest path over cut positions `0..=n` of the auxiliary DAG.
///
/// Arc `i -> j` means customers `i..j` of the permutation form one route; arcs
/// are only generated while the route load fits, so the cost is
/// `O(n * longest route)`. Route costs are summed as in [`route_distance`], so
/// `total_distance` equals the in-order sum of the route distances exactly. Equal-cost alternatives keep the smallest
/// predecessor. Returns `None` iff some customer alone exceeds the capacity.
pub fn split(instance: &Instance, permutation: &Permutation) -> Option<RoutePlan> {
    let order = permutation.order();
    let n = order.len();
    let node = |k: usize| NodeId::Customer(order[k]);
    let mut potential = vec![f64::INFINITY; n + 1];
    let mut pred = vec![usize::MAX; n + 1];
    potential[0] = 0.0;

    for i in 0..n {
        if !potential[i].is_finite() {
            continue;
        }
        let mut load = 0.0;
        let mut inner = 0.0;
        for j in (i + 1)..=n {
            load += instance.demand(node(j - 1));
            if !instance.fits_cargo(load) {
                break;
            }
            if j > i + 1 {
                inner += instance.dist(node(j - 2), node(j - 1));
            }
            let route =
                instance.dist(NodeId::Depot, node(i)) + inner + instance.dist(node(j - 1), NodeId::Depot);
            let cost = potential[i] + route;
            if cost < potential[j] {
                potential[j] = cost;
                pred[j] = i;
            }
        }
    }

    if !potential[n].is_finite() {
        return None;
    }
    let mut cuts = vec![n];
    let mut j = n;
    while j > 0 {
        j = pred[j];
        cuts.push(j);
    }
    cuts.reverse();
    let routes = cuts.windows(2).map(|w| order[w[0]..w[1]].to_vec()).collect();
    Some(RoutePlan {
        routes,
        total_distance: potential[n],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Customer, Point};

    fn inst(demands: &[f64], xs: &[f64], cap: f64) -> Instance {
        let customers = demands
            .iter()
            .zip(xs)
            .map(|(&demand, &x)| Customer {
                position: Point::new(x, 1.0),
                demand,
            })
            .collect();
        Instance::new("s", Point::new(0.0, 0.0), customers, vec![], cap, 1.0, 1.0).unwrap()
    }

    #[test]
    fn single_customer_round_trip() {
        let i = inst(&[3.0], &[0.0], 5.0);
        let plan = split(&i, &Permutation::identity(1)).unwrap();
        assert_eq!(plan.routes, vec![vec![0]]);
        assert_eq!(plan.total_distance, 2.0);
        assert_eq!(
            plan.node_walk(),
            vec![NodeId::Depot, NodeId::Customer(0), NodeId::Depot]
        );
    }

    #[test]
    fn oversized_customer_is_infeasible() {
        let i = inst(&[1.0, 6.0], &[0.0, 1.0], 5.0);
        assert!(split(&i, &Permutation::identity(2)).is_none());
    }

    #[test]
    fn capacity_forces_cut() {
        let i = inst(&[3.0, 3.0], &[1.0, 2.0], 5.0);
        let plan = split(&i, &Permutation::identity(2)).unwrap();
        assert_eq!(plan.routes, vec![vec![0], vec![1]]);
        let expected = route_distance(&i, &[0]) + route_distance(&i, &[1]);
        assert_eq!(plan.total_distance, expected);
    }
}
