//! Replicator dynamics punctuated by innovation entries and threshold
//! extinctions.

mod sim;
mod stationary;

pub use sim::{
    foster_lyapunov, pdmp_simulate, random_linear_pool, write_events_csv, write_trajectory_csv, EventKind,
    LinearFitness, PdmpConfig, PdmpEvent, PdmpReport, PdmpSample, Segment,
};
pub use stationary::{stationary_active_set, StationaryActiveSet};
