//! Noise-driven simulation: protection bits, escape-time Monte Carlo,
//! Kramers regression and stationary occupancy.

mod bits;
mod escape;
mod potential;
mod stationary;

pub use bits::{expected_persistence, protection_bits, Persistence, PERSISTENCE_SATURATION};
pub use escape::{
    kramers_scaling, simulate_escape, simulate_escape_simplex, write_escape_csv, EscapeReport, EscapeSamples,
    NoiseConfig, DEFAULT_MAX_STEPS,
};
pub use potential::DoubleWell;
pub use stationary::{stationary_concentration, Occupancy, StationaryConfig};
