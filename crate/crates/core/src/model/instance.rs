use std::fmt;

use thiserror::Error;

/// A vertex of the routing graph, addressed by role and 0-based index within that role.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NodeId {
    Depot,
    Customer(usize),
    Station(usize),
}

impl NodeId {
    pub fn is_customer(self) -> bool {
        matches!(self, NodeId::Customer(_))
    }

    /// Depot and stations restore the battery when the vehicle leaves them.
    pub fn is_charger(self) -> bool {
        !self.is_customer()
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NodeId::Depot => write!(f, "D"),
            NodeId::Customer(i) => write!(f, "C{i}"),
            NodeId::Station(j) => write!(f, "S{j}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn distance(self, other: Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Customer {
    pub position: Point,
    pub demand: f64,
}

#[derive(Debug, Error, PartialEq)]
pub enum ModelError {
    #[error("cargo capacity must be positive and finite, got {0}")]
    CargoCapacity(f64),
    #[error("battery capacity must be positive and finite, got {0}")]
    BatteryCapacity(f64),
    #[error("consumption rate must be positive and finite, got {0}")]
    ConsumptionRate(f64),
    #[error("customer {index} has invalid demand {demand}")]
    Demand { index: usize, demand: f64 },
    #[error("non-finite coordinate on {0}")]
    Coordinate(NodeId),
    #[error("feasibility slack must be finite and non-negative, got {0}")]
    Slack(f64),
    #[error("permutation has length {got}, expected {expected}")]
    PermutationLength { got: usize, expected: usize },
    #[error("permutation entry {0} is out of range or repeated")]
    PermutationEntry(usize),
}

/// A single-depot EVRP instance on the Euclidean plane.
///
/// Chargers (the depot together with every station) are addressed by a dense
/// index `0..=m`: `0` is the depot and `k` is station `k - 1`. The charging
/// matrix and the decoders use that indexing.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    name: String,
    depot: Point,
    customers: Vec<Customer>,
    stations: Vec<Point>,
    cargo_capacity: f64,
    battery_capacity: f64,
    consumption_rate: f64,
    slack: f64,
}

impl Instance {
    pub fn new(
        name: impl Into<String>,
        depot: Point,
        customers: Vec<Customer>,
        stations: Vec<Point>,
        cargo_capacity: f64,
        battery_capacity: f64,
        consumption_rate: f64,
    ) -> Result<Self, ModelError> {
        let positive = |v: f64| v.is_finite() && v > 0.0;
        if !positive(cargo_capacity) {
            return Err(ModelError::CargoCapacity(cargo_capacity));
        }
        if !positive(battery_capacity) {
            return Err(ModelError::BatteryCapacity(battery_capacity));
        }
        if !positive(consumption_rate) {
            return Err(ModelError::ConsumptionRate(consumption_rate));
        }
        let finite = |p: Point| p.x.is_finite() && p.y.is_finite();
        if !finite(depot) {
            return Err(ModelError::Coordinate(NodeId::Depot));
        }
        for (index, c) in customers.iter().enumerate() {
            if !finite(c.position) {
                return Err(ModelError::Coordinate(NodeId::Customer(index)));
            }
            if !(c.demand.is_finite() && c.demand >= 0.0) {
                return Err(ModelError::Demand {
                    index,
                    demand: c.demand,
                });
            }
        }
        if let Some(j) = stations.iter().position(|&p| !finite(p)) {
            return Err(ModelError::Coordinate(NodeId::Station(j)));
        }
        Ok(Instance {
            name: name.into(),
            depot,
            customers,
            stations,
            cargo_capacity,
            battery_capacity,
            consumption_rate,
            slack: 0.0,
        })
    }

    /// Tolerance added to `Q` and `B` in every capacity and battery check.
    pub fn with_slack(mut self, slack: f64) -> Result<Self, ModelError> {
        if !(slack.is_finite() && slack >= 0.0) {
            return Err(ModelError::Slack(slack));
        }
        self.slack = slack;
        Ok(self)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn depot(&self) -> Point {
        self.depot
    }

    pub fn customers(&self) -> &[Customer] {
        &self.customers
    }

    pub fn stations(&self) -> &[Point] {
        &self.stations
    }

    pub fn num_customers(&self) -> usize {
        self.customers.len()
    }

    pub fn num_stations(&self) -> usize {
        self.stations.len()
    }

    /// Depot plus stations.
    pub fn num_chargers(&self) -> usize {
        self.stations.len() + 1
    }

    pub fn cargo_capacity(&self) -> f64 {
        self.cargo_capacity
    }

    pub fn battery_capacity(&self) -> f64 {
        self.battery_capacity
    }

    pub fn consumption_rate(&self) -> f64 {
        self.consumption_rate
    }

    pub fn slack(&self) -> f64 {
        self.slack
    }

    pub fn position(&self, node: NodeId) -> Point {
        match node {
            NodeId::Depot => self.depot,
            NodeId::Customer(i) => self.customers[i].position,
            NodeId::Station(j) => self.stations[j],
        }
    }

    /// Demand of a node; zero for the depot and stations.
    pub fn demand(&self, node: NodeId) -> f64 {
        match node {
            NodeId::Customer(i) => self.customers[i].demand,
            _ => 0.0,
        }
    }

    pub fn contains(&self, node: NodeId) -> bool {
        match node {
            NodeId::Depot => true,
            NodeId::Customer(i) => i < self.customers.len(),
            NodeId::Station(j) => j < self.stations.len(),
        }
    }

    pub fn dist(&self, a: NodeId, b: NodeId) -> f64 {
        if a == b {
            return 0.0;
        }
        self.position(a).distance(self.position(b))
    }

    pub fn energy(&self, a: NodeId, b: NodeId) -> f64 {
        self.consumption_rate * self.dist(a, b)
    }

    pub fn charger(&self, k: usize) -> NodeId {
        if k == 0 {
            NodeId::Depot
        } else {
            NodeId::Station(k - 1)
        }
    }

    pub fn fits_cargo(&self, load: f64) -> bool {
        load <= self.cargo_capacity + self.slack
    }

    pub fn fits_battery(&self, used: f64) -> bool {
        used <= self.battery_capacity + self.slack
    }
}

/// The fixed order in which customers must be served.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    /// Checks that `order` is a bijection on `0..n`.
    pub fn new(order: Vec<usize>, n: usize) -> Result<Self, ModelError> {
        if order.len() != n {
            return Err(ModelError::PermutationLength {
                got: order.len(),
                expected: n,
            });
        }
        let mut seen = vec![false; n];
        for &c in &order {
            if c >= n || seen[c] {
                return Err(ModelError::PermutationEntry(c));
            }
            seen[c] = true;
        }
        Ok(Permutation(order))
    }

    pub fn identity(n: usize) -> Self {
        Permutation((0..n).collect())
    }

    pub fn for_instance(order: Vec<usize>, instance: &Instance) -> Result<Self, ModelError> {
        Self::new(order, instance.num_customers())
    }

    pub fn order(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_inner(self) -> Vec<usize> {
        self.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny() -> Instance {
        Instance::new(
            "t",
            Point::new(0.0, 0.0),
            vec![Customer {
                position: Point::new(3.0, 4.0),
                demand: 1.0,
            }],
            vec![Point::new(1.0, 0.0)],
            10.0,
            20.0,
            1.0,
        )
        .unwrap()
    }

    #[test]
    fn distances_are_euclidean_and_symmetric() {
        let inst = tiny();
        assert_eq!(inst.dist(NodeId::Depot, NodeId::Customer(0)), 5.0);
        assert_eq!(inst.dist(NodeId::Customer(0), NodeId::Depot), 5.0);
        assert_eq!(inst.dist(NodeId::Station(0), NodeId::Station(0)), 0.0);
        assert_eq!(inst.charger(0), NodeId::Depot);
        assert_eq!(inst.charger(1), NodeId::Station(0));
    }

    #[test]
    fn rejects_bad_parameters() {
        let bad = Instance::new("b", Point::default(), vec![], vec![], 0.0, 1.0, 1.0);
        assert_eq!(bad.unwrap_err(), ModelError::CargoCapacity(0.0));
        let bad = Instance::new(
            "b",
            Point::default(),
            vec![Customer {
                position: Point::default(),
                demand: -1.0,
            }],
            vec![],
            1.0,
            1.0,
            1.0,
        );
        assert!(matches!(bad, Err(ModelError::Demand { index: 0, .. })));
        assert!(tiny().with_slack(f64::NAN).is_err());
    }

    #[test]
    fn permutation_must_be_bijection() {
        assert!(Permutation::new(vec![1, 0, 2], 3).is_ok());
        assert_eq!(
            Permutation::new(vec![0, 0, 2], 3).unwrap_err(),
            ModelError::PermutationEntry(0)
        );
        assert!(Permutation::new(vec![0, 3, 1], 3).is_err());
        assert!(Permutation::new(vec![0], 2).is_err());
    }
}
