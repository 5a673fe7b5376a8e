//! Prox-learning dynamics.
//!
//! Every player updates `X_{i,n+1} = prox_i(X_{i,n}, γ_n v̂_{i,n})` starting
//! from the minimizer of the regularizer. [`run_gradient`] feeds the update
//! with the stochastic first-order oracle; [`run_bandit`] with the one-point
//! SPSA estimate, which only needs the payoffs of the actions played.

use crate::games::GameSequence;
use crate::geometry::{dgf_min_profile, prox_profile, ActionSet, Regularizer};
use crate::metrics::{RunTrace, TraceRow};
use crate::oracles::{FirstOrderOracle, NoiseSchedule, SpsaConfig, SpsaOracle};
use crate::{ActionProfile, DualVector, Error, Result, Scalar};

/// Step-size policy `γ_n`, shared by all players.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum StepSchedule<F> {
    Constant(F),
    /// `γ_n = gamma0 · n^{-exponent}`, `exponent ∈ (0, 1]`.
    Power {
        gamma0: F,
        exponent: F,
    },
    /// `γ_n = gamma0 / log(n + e)`.
    InverseLog {
        gamma0: F,
    },
}

impl<F: Scalar> StepSchedule<F> {
    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            Self::Constant(g) => g > F::zero() && g.is_finite(),
            Self::Power { gamma0, exponent } => {
                gamma0 > F::zero()
                    && gamma0.is_finite()
                    && exponent > F::zero()
                    && exponent <= F::one()
            }
            Self::InverseLog { gamma0 } => gamma0 > F::zero() && gamma0.is_finite(),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Config(format!("invalid step schedule {self:?}")))
        }
    }

    pub fn at(&self, n: usize) -> F {
        let nf = F::from_usize_lossy(n);
        match *self {
            Self::Constant(g) => g,
            Self::Power { gamma0, exponent } => gamma0 * nf.powf(-exponent),
            Self::InverseLog { gamma0 } => gamma0 / (nf + F::one().exp()).ln(),
        }
    }
}

/// State of a run between stages.
#[derive(Clone, Debug, PartialEq)]
pub struct RunState<F> {
    pub stage: usize,
    pub candidate: ActionProfile<F>,
    pub realized: Option<ActionProfile<F>>,
}

/// One prox-learning step: the product of the per-player prox-maps applied
/// to `γ_n v̂_n`.
pub fn prox_learn_step<F: Scalar>(
    state: &RunState<F>,
    reg: &Regularizer,
    sets: &[ActionSet<F>],
    signal: &DualVector<F>,
    step: F,
) -> Result<RunState<F>> {
    if !signal.is_finite() {
        return Err(Error::NonFinite {
            stage: state.stage,
            what: "feedback signal".into(),
        });
    }
    let candidate = prox_profile(reg, sets, &state.candidate, &signal.scaled(step))?;
    Ok(RunState {
        stage: state.stage + 1,
        candidate,
        realized: None,
    })
}

/// A learner that sees nothing but its feedback signals.
#[derive(Clone, Debug)]
pub struct ProxLearner<F> {
    reg: Regularizer,
    sets: Vec<ActionSet<F>>,
    schedule: StepSchedule<F>,
    state: RunState<F>,
}

impl<F: Scalar> ProxLearner<F> {
    pub fn new(
        reg: Regularizer,
        sets: Vec<ActionSet<F>>,
        schedule: StepSchedule<F>,
    ) -> Result<Self> {
        schedule.validate()?;
        let start = dgf_min_profile(&reg, &sets)?;
        Ok(Self {
            reg,
            sets,
            schedule,
            state: RunState {
                stage: 1,
                candidate: start,
                realized: None,
            },
        })
    }

    pub fn state(&self) -> &RunState<F> {
        &self.state
    }

    pub fn stage(&self) -> usize {
        self.state.stage
    }

    pub fn candidate(&self) -> &ActionProfile<F> {
        &self.state.candidate
    }

    pub fn step_size(&self) -> F {
        self.schedule.at(self.state.stage)
    }

    /// Consumes the feedback for the current stage and moves to the next.
    pub fn observe(&mut self, signal: &DualVector<F>) -> Result<()> {
        let step = self.step_size();
        self.state = prox_learn_step(&self.state, &self.reg, &self.sets, signal, step)?;
        Ok(())
    }
}

/// Prox-learning with stochastic first-order feedback for `horizon` stages.
pub fn run_gradient<F: Scalar>(
    seq: &GameSequence<F>,
    reg: &Regularizer,
    schedule: &StepSchedule<F>,
    noise: &NoiseSchedule<F>,
    horizon: usize,
    seed: u64,
) -> Result<RunTrace<F>> {
    check_horizon(horizon)?;
    let sets = seq.sets().to_vec();
    let dims: Vec<usize> = sets.iter().map(ActionSet::dim).collect();
    let mut oracle = FirstOrderOracle::new(*noise, &dims, seed)?;
    let mut learner = ProxLearner::new(*reg, sets, *schedule)?;
    let mut trace = RunTrace::with_capacity(horizon);
    for n in 1..=horizon {
        let game = seq.stage(n)?;
        let x = learner.candidate().clone();
        let fb = oracle.feedback(&game, &x, n);
        let step = learner.step_size();
        learner.observe(&fb.signal)?;
        trace.push(TraceRow {
            stage: n,
            candidate: x,
            realized: None,
            step,
            radius: None,
            bias_norm: Some(fb.bias.norm()),
            noise_norm: Some(fb.noise.norm()),
            signal: fb.signal,
            gradient: fb.gradient,
        });
    }
    Ok(trace)
}

/// Payoff-based prox-learning: each stage plays a perturbed query point and
/// feeds the SPSA estimate to the learner.
pub fn run_bandit<F: Scalar>(
    seq: &GameSequence<F>,
    reg: &Regularizer,
    schedule: &StepSchedule<F>,
    spsa: &SpsaConfig<F>,
    horizon: usize,
    seed: u64,
) -> Result<RunTrace<F>> {
    check_horizon(horizon)?;
    let sets = seq.sets().to_vec();
    let mut oracle = SpsaOracle::new(spsa.clone(), seed);
    let mut learner = ProxLearner::new(*reg, sets, *schedule)?;
    let mut trace = RunTrace::with_capacity(horizon);
    for n in 1..=horizon {
        let game = seq.stage(n)?;
        let x = learner.candidate().clone();
        let fb = oracle.feedback(&game, &x, n);
        let step = learner.step_size();
        learner.observe(&fb.signal)?;
        trace.push(TraceRow {
            stage: n,
            gradient: game.gradient(&x),
            candidate: x,
            realized: Some(fb.realized),
            step,
            radius: Some(fb.radius),
            signal: fb.signal,
            bias_norm: None,
            noise_norm: None,
        });
    }
    Ok(trace)
}

fn check_horizon(horizon: usize) -> Result<()> {
    if horizon == 0 {
        Err(Error::InvalidInput("horizon must be at least 1".into()))
    } else {
        Ok(())
    }
}
