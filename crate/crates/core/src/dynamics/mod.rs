//! Replicator dynamics on the simplex and the diagnostics built on it.

mod adiabatic;
mod basin;
mod continuous;
mod domination;
mod imitation;
mod lyapunov;
mod price;
mod replicator;
mod swirl;

pub use adiabatic::{adiabatic_tracking_check, AdiabaticFamily, AdiabaticReport, CongestionDrift};
pub use basin::{basin_analysis, BasinReport, EndpointStability};
pub use continuous::{discretized_continuous_run, wasserstein1, ContinuousReport};
pub use domination::{detect_domination, DominationReport};
pub use imitation::{simulate_imitation, ImitationRun};
pub use lyapunov::{check_lyapunov_monotone, check_series_monotone, LyapunovReport};
pub use price::{mean_fitness, price_decomposition, replicator_velocity, variance, PriceTerms};
pub use replicator::{integrate_replicator, integrate_replicator_sampled, Trajectory};
pub use swirl::{swirl_decompose, SwirlRatio, SwirlReport};

pub(crate) use price::price_terms_raw;
pub(crate) use replicator::csv_err;
