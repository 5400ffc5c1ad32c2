//! Multi-level stacks: gain matrices, the small-gain test, Neumann weights,
//! block extension with slack accounting and alignment matrices.

mod alignment;
mod budget;
mod gain;
mod multilevel;
mod spectral;

pub use alignment::{alignment_analysis, misalignment_hopf_threshold, AlignmentReport};
pub use budget::{safe_depth_uniform, slack_budget, SlackBudget};
pub use gain::{
    analyze_stack, breaking_scale, build_gain_matrix, extend_block, neumann_weights, ExtensionReport,
    GainAnalysis, Level, LevelStack, NeumannWeights, Verdict, CRITICAL_BAND,
};
pub use multilevel::{integrate_levels, joint_lyapunov, JointLyapunovReport, LevelTrajectories};
pub use spectral::{gershgorin_bound, spectral_radius, SPECTRAL_MAX_ITER, SPECTRAL_TOL};
