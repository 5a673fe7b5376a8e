//! Figures of merit computed from run traces: regret, gaps, tracking error,
//! equilibrium variation, Bregman series and rate fits.
//!
//! Everything here is a pure function of a finished trace.

mod rates;
mod regret;
mod trace;
mod tracking;

pub use rates::{fit_rate, fit_tail, RateFit};
pub use regret::{
    dynamic_regret, dynamic_regret_series, gap, gap_series, static_regret, static_regret_with,
    InnerSolver,
};
pub use trace::{RunTrace, TraceRow};
pub use tracking::{
    bregman_series, bregman_to_ne, equilibrium_path, equilibrium_variation, ergodic_average,
    tracking_error, tracking_series, unique_equilibrium, variation_series, ErgodicAverage,
};
