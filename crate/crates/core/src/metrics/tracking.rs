use std::ops::RangeInclusive;

use super::trace::RunTrace;
use crate::equilibrium::{nash_closed_form, nash_extragradient};
use crate::games::{GameSequence, Monotonicity, StageGame};
use crate::geometry::{bregman_profile, Regularizer};
use crate::{ActionProfile, Error, Result, Scalar};

/// The unique equilibrium of a stage game: closed form where available,
/// otherwise extragradient on a strongly monotone game.
pub fn unique_equilibrium<F: Scalar>(game: &StageGame<F>) -> Result<ActionProfile<F>> {
    match nash_closed_form(game) {
        Ok(x) => Ok(x),
        Err(Error::Unsupported(why)) => match game.monotonicity() {
            Monotonicity::Strong(_) | Monotonicity::Strict => {
                Ok(nash_extragradient(game, F::lit(1e-10), 200_000)?.point)
            }
            Monotonicity::Monotone => Err(Error::Unsupported(format!(
                "equilibrium may not be unique: {why}"
            ))),
        },
        Err(e) => Err(e),
    }
}

/// `x*_1, …, x*_T`.
pub fn equilibrium_path<F: Scalar>(
    seq: &GameSequence<F>,
    horizon: usize,
) -> Result<Vec<ActionProfile<F>>> {
    if matches!(seq.drift(), crate::games::Drift::Static) {
        let x = unique_equilibrium(seq.base())?;
        return Ok(vec![x; horizon]);
    }
    (1..=horizon)
        .map(|n| unique_equilibrium(&seq.stage(n)?))
        .collect()
}

/// Per-stage squared distances `‖X_n − x*_n‖²` over the whole trace, using
/// the realized actions of a bandit trace when `realized` is set.
pub fn tracking_series<F: Scalar>(
    trace: &RunTrace<F>,
    path: &[ActionProfile<F>],
    realized: bool,
) -> Result<Vec<F>> {
    if path.len() < trace.len() {
        return Err(Error::InvalidInput(format!(
            "equilibrium path covers {} stages, trace has {}",
            path.len(),
            trace.len()
        )));
    }
    Ok(trace
        .rows()
        .iter()
        .zip(path)
        .map(|(row, eq)| row.action(realized).sub(eq).norm_sq())
        .collect())
}

/// `Σ_{n∈window} ‖X_n − x*_n‖²`.
pub fn tracking_error<F: Scalar>(
    trace: &RunTrace<F>,
    seq: &GameSequence<F>,
    window: RangeInclusive<usize>,
    realized: bool,
) -> Result<F> {
    let rows = trace.window(&window)?;
    let mut total = F::zero();
    for row in rows {
        let eq = unique_equilibrium(&seq.stage(row.stage)?)?;
        total += row.action(realized).sub(&eq).norm_sq();
    }
    Ok(total)
}

/// `V(T) = Σ_{n=1}^{T} ‖x*_{n+1} − x*_n‖`.
pub fn equilibrium_variation<F: Scalar>(seq: &GameSequence<F>, horizon: usize) -> Result<F> {
    Ok(variation_series(&equilibrium_path(seq, horizon + 1)?)
        .last()
        .copied()
        .unwrap_or_else(F::zero))
}

/// Running `V(n)` for `n = 1..len−1` of an equilibrium path.
pub fn variation_series<F: Scalar>(path: &[ActionProfile<F>]) -> Vec<F> {
    let mut total = F::zero();
    path.windows(2)
        .map(|w| {
            total += w[1].sub(&w[0]).norm();
            total
        })
        .collect()
}

/// `n ↦ D(x*, X_n)` against the equilibrium of the limit game.
pub fn bregman_to_ne<F: Scalar>(
    trace: &RunTrace<F>,
    seq: &GameSequence<F>,
    reg: &Regularizer,
) -> Result<Vec<F>> {
    let limit = seq
        .limit_game()
        .ok_or_else(|| Error::Unsupported("the sequence has no limit game".into()))?;
    let eq = unique_equilibrium(&limit)?;
    bregman_series(trace, seq, reg, &eq)
}

pub fn bregman_series<F: Scalar>(
    trace: &RunTrace<F>,
    seq: &GameSequence<F>,
    reg: &Regularizer,
    eq: &ActionProfile<F>,
) -> Result<Vec<F>> {
    trace
        .rows()
        .iter()
        .map(|row| bregman_profile(reg, seq.sets(), eq, &row.candidate))
        .collect()
}

/// Step-weighted running average `x̄_n = Σ_{k≤n} γ_k X_k / Σ_{k≤n} γ_k`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ErgodicAverage<F> {
    sum: Option<ActionProfile<F>>,
    weight: F,
}

impl<F: Scalar> ErgodicAverage<F> {
    pub fn new() -> Self {
        Self {
            sum: None,
            weight: F::zero(),
        }
    }

    pub fn push(&mut self, x: &ActionProfile<F>, weight: F) {
        match &mut self.sum {
            Some(s) => s.add_scaled(weight, x),
            None => self.sum = Some(x.scaled(weight)),
        }
        self.weight += weight;
    }

    pub fn current(&self) -> Option<ActionProfile<F>> {
        self.sum.as_ref().map(|s| s.scaled(F::one() / self.weight))
    }
}

pub fn ergodic_average<F: Scalar>(trace: &RunTrace<F>) -> Vec<ActionProfile<F>> {
    let mut avg = ErgodicAverage::new();
    trace
        .rows()
        .iter()
        .map(|row| {
            avg.push(&row.candidate, row.step);
            avg.current().expect("at least one point was pushed")
        })
        .collect()
}
