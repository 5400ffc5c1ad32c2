//! ROC geometry: agent types, the upper-hull frontier, two-constraint
//! portfolio LPs with shadow prices, ESDI checks and the price of anarchy.

mod esdi;
mod hull;
mod poa;
mod portfolio;
mod types;

pub use esdi::{esdi_verify, EsdiReport, ESDI_TOL};
pub use hull::{roc_frontier, write_frontier_csv, FrontierReport};
pub use poa::{price_of_anarchy, replicator_stability, PoaReport, RestPoint};
pub use portfolio::{
    optimal_unit_mix, optimize_portfolio, sparsity_check, Binding, PortfolioSolution, SUPPORT_TOL,
};
pub use types::{normalize_types, AgentTypeSpec, FrontierPoint};
