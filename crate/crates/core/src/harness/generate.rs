use crate::model::{Customer, Instance, Point};
use crate::permgen::SplitMix64;

/// Parameters of a random unit-square instance. Defaults are the baseline
/// configuration of the front-size study.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InstanceParams {
    pub customers: usize,
    pub stations: usize,
    pub battery_capacity: f64,
    pub cargo_capacity: f64,
    pub max_demand: f64,
    pub consumption_rate: f64,
}

impl Default for InstanceParams {
    fn default() -> Self {
        InstanceParams {
            customers: 100,
            stations: 10,
            battery_capacity: 2.0,
            cargo_capacity: 200.0,
            max_demand: 10.0,
            consumption_rate: 1.0,
        }
    }
}

/// Draws an instance from one [`SplitMix64`] stream seeded with `seed`:
/// depot `(x, y)`, then per customer `(x, y, u)` with demand
/// `max_demand * (1 - u)`, then per station `(x, y)`. Coordinates are uniform
/// on `[0, 1)`, demands uniform on `(0, max_demand]`.
pub fn generate_instance(params: &InstanceParams, seed: u64) -> Instance {
    let mut rng = SplitMix64::new(seed);
    let point = |rng: &mut SplitMix64| Point::new(rng.next_f64(), rng.next_f64());
    let depot = point(&mut rng);
    let customers = (0..params.customers)
        .map(|_| {
            let position = point(&mut rng);
            let demand = params.max_demand * (1.0 - rng.next_f64());
            Customer { position, demand }
        })
        .collect();
    let stations = (0..params.stations).map(|_| point(&mut rng)).collect();
    Instance::new(
        format!("rand-n{}-m{}-s{seed:016x}", params.customers, params.stations),
        depot,
        customers,
        stations,
        params.cargo_capacity,
        params.battery_capacity,
        params.consumption_rate,
    )
    .expect("generator parameters must be positive")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn baseline_shape() {
        let inst = generate_instance(&InstanceParams::default(), 7);
        assert_eq!(inst.num_customers(), 100);
        assert_eq!(inst.num_stations(), 10);
        assert_eq!(inst.cargo_capacity(), 200.0);
        assert_eq!(inst.battery_capacity(), 2.0);
        assert_eq!(inst.consumption_rate(), 1.0);
        for c in inst.customers() {
            assert!(c.demand > 0.0 && c.demand <= 10.0);
            assert!((0.0..1.0).contains(&c.position.x));
        }
    }

    #[test]
    fn same_seed_same_instance() {
        let p = InstanceParams::default();
        assert_eq!(generate_instance(&p, 3), generate_instance(&p, 3));
        assert_ne!(generate_instance(&p, 3), generate_instance(&p, 4));
    }
}
