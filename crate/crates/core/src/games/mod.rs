//! Stage-game families and time-varying game sequences.
//!
//! Games are immutable and evaluation is pure. A player set that changes
//! over time can be modelled by giving absent players zero payoff; the
//! sequences shipped here keep the player set fixed.

mod sequence;
mod stage;

pub use sequence::{Drift, GameSequence};
pub use stage::{GameFamily, Monotonicity, StageGame};
