//! Decoders that turn a fixed customer permutation into electric vehicle routes.
//!
//! * [`joint`]: exact decoder choosing route splits and charging stops together.
//! * [`split`] + [`fixed_route`]: split first, then insert charging stops
//!   optimally or with at most one stop per gap.
//! * [`oracle`]: exhaustive reference decoders for tiny instances.
//! * [`harness`]: instance generation, sweeps, method comparisons, timing.

pub mod charging;
pub mod fixed_route;
pub mod harness;
pub mod io;
pub mod joint;
pub mod model;
pub mod oracle;
pub mod permgen;
pub mod split;

pub use charging::ChargingMatrix;
pub use io::Method;
pub use model::{validate, DecodeResult, Instance, NodeId, Outcome, Permutation, Solution};
pub use split::RoutePlan;
