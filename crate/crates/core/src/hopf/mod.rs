//! Biased Rock–Paper–Scissors Hopf lab: critical curve, first Lyapunov
//! coefficient, amplitude law and simulated limit cycles.

mod cycle;
mod formulas;

pub use cycle::{
    hopf_orientation, measure_limit_cycle, sweep, write_sweep_csv, BiasedRps, LimitCycle, OscillatorySide, SweepRow,
};
pub use formulas::{biased_rps_matrix, first_lyapunov_coefficient, hopf_curve, predicted_amplitude, Amplitude};
