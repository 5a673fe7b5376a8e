use std::ops::RangeInclusive;

use crate::{ActionProfile, DualVector, Error, Result, Scalar};

/// One stage of a learning run.
#[derive(Clone, Debug, PartialEq)]
pub struct TraceRow<F> {
    pub stage: usize,
    /// Candidate action `X_n` produced by the learner.
    pub candidate: ActionProfile<F>,
    /// Action actually played, for payoff-based runs.
    pub realized: Option<ActionProfile<F>>,
    pub step: F,
    pub radius: Option<F>,
    /// The feedback the learner consumed.
    pub signal: DualVector<F>,
    /// `V_n(X_n)`, cached for gap and regret computations.
    pub gradient: DualVector<F>,
    pub bias_norm: Option<F>,
    pub noise_norm: Option<F>,
}

impl<F: Scalar> TraceRow<F> {
    /// The candidate or, when `realized` is set, the played action.
    pub fn action(&self, realized: bool) -> &ActionProfile<F> {
        if realized {
            self.realized.as_ref().unwrap_or(&self.candidate)
        } else {
            &self.candidate
        }
    }
}

/// Per-stage record of a run. Stages are numbered from 1 and windows are
/// inclusive stage ranges.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct RunTrace<F> {
    rows: Vec<TraceRow<F>>,
}

impl<F: Scalar> RunTrace<F> {
    pub fn new() -> Self {
        Self { rows: Vec::new() }
    }

    pub fn with_capacity(n: usize) -> Self {
        Self {
            rows: Vec::with_capacity(n),
        }
    }

    pub fn push(&mut self, row: TraceRow<F>) {
        debug_assert_eq!(row.stage, self.rows.len() + 1);
        self.rows.push(row);
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn rows(&self) -> &[TraceRow<F>] {
        &self.rows
    }

    /// Row of stage `n` (1-based).
    pub fn stage(&self, n: usize) -> &TraceRow<F> {
        &self.rows[n - 1]
    }

    pub fn full_window(&self) -> RangeInclusive<usize> {
        1..=self.rows.len()
    }

    pub fn is_bandit(&self) -> bool {
        self.rows.first().is_some_and(|r| r.realized.is_some())
    }

    /// Rows of a window, validated against the trace length.
    pub fn window(&self, window: &RangeInclusive<usize>) -> Result<&[TraceRow<F>]> {
        let (start, end) = (*window.start(), *window.end());
        if start == 0 || start > end || end > self.rows.len() {
            return Err(Error::InvalidInput(format!(
                "window {start}..={end} is not within stages 1..={}",
                self.rows.len()
            )));
        }
        Ok(&self.rows[start - 1..end])
    }
}
