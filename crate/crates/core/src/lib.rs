//! Numerical toolkit for strategic evolution: replicator dynamics and
//! their diagnostics, ROC frontiers, multi-level small-gain analysis,
//! escape-time and Hopf labs, closed-form market/governance formulas and
//! an innovation jump process.

pub mod dynamics;
pub mod error;
pub mod fitness;
pub mod frontier;
pub mod hopf;
pub mod market;
pub mod ode;
pub mod pdmp;
pub mod rng;
pub mod scenario;
pub mod simplex;
pub mod stack;
pub mod stats;
pub mod stochastic;

pub use error::{Error, Result};
pub use fitness::{FitnessModel, Matrix};
pub use simplex::PopulationState;
