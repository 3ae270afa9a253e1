use std::collections::BTreeMap;
use std::ops::Bound;

use ordered_float::OrderedFloat;

/// Resource vector compared under Pareto dominance: `(distance, cargo, battery)`.
///
/// Two-resource labels report a constant cargo, which reduces the 3D relation
/// to the 2D one over `(distance, battery)`.
pub trait Resources {
    fn resources(&self) -> [f64; 3];
}

/// How a label reached the current node from its parent.
///
/// Charger indices use the dense `0..=m` numbering of [`crate::model::Instance`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Extension {
    Start,
    Direct,
    Charge { entry: usize, exit: usize },
    DepotDetour { entry: usize, exit: usize },
}

/// Partial decoding state at a fixed permutation position.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Label {
    pub dist: f64,
    pub cargo: f64,
    pub battery: f64,
    /// Index of the parent label in the previous front.
    pub parent: usize,
    pub extension: Extension,
}

impl Label {
    pub fn root() -> Self {
        Label {
            dist: 0.0,
            cargo: 0.0,
            battery: 0.0,
            parent: 0,
            extension: Extension::Start,
        }
    }
}

impl Resources for Label {
    fn resources(&self) -> [f64; 3] {
        [self.dist, self.cargo, self.battery]
    }
}

impl Resources for [f64; 3] {
    fn resources(&self) -> [f64; 3] {
        *self
    }
}

/// `a` dominates `b`: no worse in every resource and strictly better in one.
pub fn dominates<L: Resources>(a: &L, b: &L) -> bool {
    let (a, b) = (a.resources(), b.resources());
    let no_worse = a.iter().zip(&b).all(|(x, y)| x <= y);
    no_worse && a.iter().zip(&b).any(|(x, y)| x < y)
}

/// A set of mutually non-dominated labels, ordered by `(dist, cargo, battery)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Front<L> {
    labels: Vec<L>,
}

impl<L> Front<L> {
    pub fn single(label: L) -> Self {
        Front { labels: vec![label] }
    }

    pub fn labels(&self) -> &[L] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn into_labels(self) -> Vec<L> {
        self.labels
    }

    pub fn iter(&self) -> std::slice::Iter<'_, L> {
        self.labels.iter()
    }

    /// Wraps labels without pruning. Used when dominance pruning is switched off.
    pub fn unpruned(labels: Vec<L>) -> Self {
        Front { labels }
    }
}

fn lexicographic(a: &[f64; 3], b: &[f64; 3]) -> std::cmp::Ordering {
    a[0].total_cmp(&b[0])
        .then(a[1].total_cmp(&b[1]))
        .then(a[2].total_cmp(&b[2]))
}

/// Keeps the non-dominated labels, collapsing identical resource vectors to the
/// earliest candidate.
///
/// Candidates are stably sorted by `(dist, cargo, battery)`; a label can then only
/// be dominated by one already accepted, which reduces the test to a 2D query
/// over `(cargo, battery)`. The accepted points form a staircase (battery strictly
/// decreasing in cargo) kept in a `BTreeMap`, so the whole pass is `O(m log m)`.
pub fn prune<L: Resources>(mut candidates: Vec<L>) -> Front<L> {
    candidates.sort_by(|a, b| lexicographic(&a.resources(), &b.resources()));
    let mut stair: BTreeMap<OrderedFloat<f64>, f64> = BTreeMap::new();
    let mut kept = Vec::with_capacity(candidates.len().min(256));
    for label in candidates {
        let [_, q, b] = label.resources();
        let key = OrderedFloat(q);
        if let Some((_, &best_b)) = stair.range(..=key).next_back() {
            if best_b <= b {
                continue;
            }
        }
        let covered: Vec<OrderedFloat<f64>> = stair
            .range((Bound::Included(key), Bound::Unbounded))
            .take_while(|(_, &sb)| sb >= b)
            .map(|(&k, _)| k)
            .collect();
        for k in covered {
            stair.remove(&k);
        }
        stair.insert(key, b);
        kept.push(label);
    }
    Front { labels: kept }
}

/// Quadratic reference filter with the same output contract as [`prune`].
pub fn prune_pairwise<L: Resources>(mut candidates: Vec<L>) -> Front<L> {
    candidates.sort_by(|a, b| lexicographic(&a.resources(), &b.resources()));
    let keep: Vec<bool> = candidates
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let dominated = candidates.iter().any(|o| dominates(o, c));
            let duplicate = candidates[..i].iter().any(|o| o.resources() == c.resources());
            !dominated && !duplicate
        })
        .collect();
    Front {
        labels: candidates
            .into_iter()
            .zip(keep)
            .filter_map(|(l, k)| k.then_some(l))
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn t(d: f64, q: f64, b: f64) -> [f64; 3] {
        [d, q, b]
    }

    fn as_set(front: &Front<[f64; 3]>) -> Vec<[f64; 3]> {
        let mut v = front.labels().to_vec();
        v.sort_by(lexicographic);
        v
    }

    #[test]
    fn dominance_examples() {
        assert!(dominates(&t(1., 1., 1.), &t(2., 2., 2.)));
        assert!(!dominates(&t(1., 2., 1.), &t(2., 1., 2.)));
        assert!(!dominates(&t(2., 1., 2.), &t(1., 2., 1.)));
        assert!(!dominates(&t(1., 1., 1.), &t(1., 1., 1.)));
        assert!(dominates(&t(1., 1., 1.), &t(1., 1., 2.)));
    }

    #[test]
    fn prune_examples() {
        let f = prune(vec![t(1., 1., 1.), t(2., 2., 2.)]);
        assert_eq!(f.labels(), &[t(1., 1., 1.)]);
        let f = prune(vec![t(1., 2., 3.), t(3., 2., 1.), t(2., 2., 2.)]);
        assert_eq!(f.len(), 3);
    }

    #[test]
    fn duplicates_keep_earliest_candidate() {
        let mk = |parent| Label {
            dist: 1.0,
            cargo: 1.0,
            battery: 1.0,
            parent,
            extension: Extension::Direct,
        };
        let f = prune(vec![mk(7), mk(3), mk(9)]);
        assert_eq!(f.len(), 1);
        assert_eq!(f.labels()[0].parent, 7);
    }

    #[test]
    fn equal_cargo_on_staircase_is_replaced() {
        // second point has the same cargo but lower battery at a higher distance
        let f = prune(vec![t(1., 5., 5.), t(2., 5., 3.), t(3., 5., 4.)]);
        assert_eq!(as_set(&f), vec![t(1., 5., 5.), t(2., 5., 3.)]);
    }

    fn triple() -> impl Strategy<Value = [f64; 3]> {
        // small integer grid forces plenty of ties
        (0u8..6, 0u8..6, 0u8..6).prop_map(|(a, b, c)| [a as f64, b as f64, c as f64])
    }

    proptest! {
        #[test]
        fn prune_matches_pairwise(cands in prop::collection::vec(triple(), 0..100)) {
            prop_assert_eq!(as_set(&prune(cands.clone())), as_set(&prune_pairwise(cands)));
        }

        #[test]
        fn prune_is_idempotent(cands in prop::collection::vec(triple(), 0..60)) {
            let once = prune(cands);
            let twice = prune(once.labels().to_vec());
            prop_assert_eq!(once, twice);
        }

        #[test]
        fn prune_ignores_candidate_order(
            cands in prop::collection::vec(triple(), 0..60),
            rot in 0usize..60,
        ) {
            let mut shuffled = cands.clone();
            shuffled.reverse();
            if !shuffled.is_empty() {
                let r = rot % shuffled.len();
                shuffled.rotate_left(r);
            }
            prop_assert_eq!(as_set(&prune(cands)), as_set(&prune(shuffled)));
        }

        #[test]
        fn output_is_mutually_non_dominated(cands in prop::collection::vec(triple(), 0..80)) {
            let f = prune(cands);
            for a in f.labels() {
                for b in f.labels() {
                    prop_assert!(!dominates(a, b));
                }
            }
        }

        #[test]
        fn dominance_is_strict_partial_order(a in triple(), b in triple(), c in triple()) {
            prop_assert!(!dominates(&a, &a));
            prop_assert!(!(dominates(&a, &b) && dominates(&b, &a)));
            if dominates(&a, &b) && dominates(&b, &c) {
                prop_assert!(dominates(&a, &c));
            }
        }
    }
}
