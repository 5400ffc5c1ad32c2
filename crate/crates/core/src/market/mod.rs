//! Closed-form market and governance formulas, the fork game and the
//! spawn-manipulation search over voting rules.

mod cooperation;
mod fork;
mod governance;
mod tipping;
mod voting;

pub use cooperation::{
    cooperation_sustainable, grim_trigger_threshold, hamilton_invade, institutional_floor, lineage_shadow,
    n_player_threshold, unify_discounts, usdi_step, DiscountUnification, ShadowParams,
};
pub use fork::{
    amendment_fixture, fork_analysis, pure_nash_2x2, ForkAction, ForkReport, PayoffMatrix,
};
pub use governance::{
    elite_tipping, governance_thresholds, umpire_game, EliteTipping, GovernanceParams, GovernanceThresholds,
    UmpireReport,
};
pub use tipping::{
    beta_crit, default_steepness, iterate_s_curve, myopic_slope, spawn_adjusted_slope, tipping_index,
    TippingParams,
};
pub use voting::{
    is_manipulation, manipulation_bound, spawn_manipulation_search, winner, Manipulation, VotingProfile, VotingRule,
};
