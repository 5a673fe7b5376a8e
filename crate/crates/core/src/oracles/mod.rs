//! Feedback oracles: the stochastic first-order oracle and the one-point
//! SPSA estimator built from payoff observations alone.
//!
//! An oracle owns its random streams; independent runs never share one.

mod sfo;
mod spsa;

pub use sfo::{FeedbackSignal, FirstOrderOracle, NoiseSchedule};
pub use spsa::{SpsaConfig, SpsaFeedback, SpsaOracle};
