//! Orbit classification, periodic orbits and basins.

pub mod classify;
pub mod periodic;

pub use classify::{basin_map, classify_point, BasinMap, GridWindow, OrbitClassification, Verdict};
pub use periodic::{
    census_range, cycle_multipliers, find_attracting_cycles, find_periodic_points, Census, NewtonOptions,
    PeriodicOrbit, Stability,
};
