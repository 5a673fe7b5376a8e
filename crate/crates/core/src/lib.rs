//! No-regret prox-learning in time-varying concave games.
//!
//! The crate is organised around the pieces of a learning experiment:
//!
//! - [`geometry`]: action sets, distance-generating functions, Bregman
//!   divergences and prox-mappings.
//! - [`games`]: stage-game families and time-varying game sequences.
//! - [`equilibrium`]: Nash equilibrium oracles and certificates.
//! - [`oracles`]: stochastic first-order feedback and the one-point
//!   (SPSA) payoff-based gradient estimator.
//! - [`learner`]: prox-learning (online mirror descent) driven by either
//!   oracle.
//! - [`metrics`]: regret, gap, tracking error, equilibrium variation and
//!   rate fits over recorded traces.
//! - [`runner`]: experiment configuration, presets and CSV/JSON output.
//!
//! All numerical code is generic over a [`Scalar`] (`f32` or `f64`). The
//! experiment runner works in `f64`; the `*64` aliases below name the
//! concrete types it uses.

pub mod equilibrium;
pub mod error;
pub mod games;
pub mod geometry;
pub mod learner;
pub mod metrics;
pub mod oracles;
pub mod profile;
pub mod rng;
pub mod runner;
pub mod scalar;

pub use error::{Error, Result};
pub use profile::{ActionProfile, DualVector, Profile};
pub use scalar::Scalar;

pub type ActionSet64 = geometry::ActionSet<f64>;
pub type Profile64 = Profile<f64>;
pub type StageGame64 = games::StageGame<f64>;
pub type GameSequence64 = games::GameSequence<f64>;
pub type RunTrace64 = metrics::RunTrace<f64>;
pub type StepSchedule64 = learner::StepSchedule<f64>;
pub type NoiseSchedule64 = oracles::NoiseSchedule<f64>;
pub type SpsaConfig64 = oracles::SpsaConfig<f64>;

pub type ActionSet32 = geometry::ActionSet<f32>;
pub type Profile32 = Profile<f32>;
pub type StageGame32 = games::StageGame<f32>;
