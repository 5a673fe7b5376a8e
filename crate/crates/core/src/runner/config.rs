use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::games::{Drift, GameSequence, StageGame};
use crate::geometry::RegularizerKind;
use crate::learner::StepSchedule;
use crate::oracles::{NoiseSchedule, SpsaConfig};
use crate::{Error, Result};

/// Margin by which shipped configurations clear the strict exponent
/// conditions of their target guarantee.
pub const EXPONENT_MARGIN: f64 = 0.05;

/// A complete, reproducible experiment description.
///
/// ```toml
/// name = "tracking"
/// horizon = 100000
/// seeds = [0, 1, 2]
/// regularizer = "euclidean"
/// target = "tracking"
///
/// [game]
/// family = "quadratic-network"
/// mu = 1.0
/// coupling = 0.2
/// targets = [[0.45], [0.5], [0.55]]
/// lo = 0.0
/// hi = 1.0
///
/// [sequence]
/// kind = "drifting"
/// exponent = 0.5
/// speed = 0.05
/// amplitude = 0.2
///
/// [learner]
/// kind = "gradient"
/// step = { schedule = "power", gamma0 = 0.5, exponent = 0.1667 }
/// noise = { sigma0 = 0.5 }
/// ```
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub name: String,
    pub horizon: usize,
    pub seeds: Vec<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
    pub regularizer: RegularizerKind,
    /// The guarantee whose exponent conditions the schedules must satisfy.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<Target>,
    /// Proceed with a warning when the exponent conditions fail.
    #[serde(default)]
    pub allow_violations: bool,
    pub game: GameConfig,
    #[serde(default)]
    pub sequence: SequenceConfig,
    pub learner: LearnerConfig,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Target {
    StaticRegret,
    StabilizingConvergence,
    Tracking,
    DynamicRegret,
    BanditTracking,
    BanditConvergence,
    ErgodicSaddle,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case", deny_unknown_fields)]
pub enum GameConfig {
    BilinearZeroSum {
        matrix: Vec<Vec<f64>>,
    },
    KellyAuction {
        gains: Vec<f64>,
        capacity: f64,
        entry_barrier: f64,
        budgets: Vec<f64>,
    },
    QuadraticNetwork {
        mu: f64,
        coupling: f64,
        targets: Vec<Vec<f64>>,
        lo: f64,
        hi: f64,
    },
    Linear {
        payoffs: Vec<f64>,
    },
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum SequenceConfig {
    #[default]
    Static,
    Stabilizing {
        beta0: f64,
        decay: f64,
    },
    Drifting {
        exponent: f64,
        speed: f64,
        amplitude: f64,
    },
    RandomPayoffs {
        amplitude: f64,
        #[serde(default)]
        seed: u64,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum LearnerConfig {
    Gradient {
        step: StepConfig,
        #[serde(default)]
        noise: NoiseConfig,
    },
    Bandit {
        step: StepConfig,
        sampling: SamplingConfig,
    },
}

impl LearnerConfig {
    pub fn step(&self) -> &StepConfig {
        match self {
            Self::Gradient { step, .. } | Self::Bandit { step, .. } => step,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "schedule", rename_all = "kebab-case", deny_unknown_fields)]
pub enum StepConfig {
    Constant { gamma: f64 },
    Power { gamma0: f64, exponent: f64 },
    InverseLog { gamma0: f64 },
}

impl StepConfig {
    pub fn schedule(&self) -> StepSchedule<f64> {
        match *self {
            Self::Constant { gamma } => StepSchedule::Constant(gamma),
            Self::Power { gamma0, exponent } => StepSchedule::Power { gamma0, exponent },
            Self::InverseLog { gamma0 } => StepSchedule::InverseLog { gamma0 },
        }
    }

    fn power_exponent(&self) -> Option<f64> {
        match *self {
            Self::Power { exponent, .. } => Some(exponent),
            _ => None,
        }
    }
}

/// Oracle statistics: bias `bias0 · n^{-bias_decay}` (omit `bias_decay`
/// for an unbiased oracle) and noise scale `sigma0 · n^{sigma_growth}`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseConfig {
    #[serde(default)]
    pub bias0: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bias_decay: Option<f64>,
    #[serde(default)]
    pub sigma0: f64,
    #[serde(default)]
    pub sigma_growth: f64,
}

impl NoiseConfig {
    pub fn schedule(&self) -> NoiseSchedule<f64> {
        NoiseSchedule {
            bias0: self.bias0,
            bias_decay: self.bias_decay,
            sigma0: self.sigma0,
            sigma_growth: self.sigma_growth,
        }
    }

    fn bias_exponent(&self) -> f64 {
        match self.bias_decay {
            Some(l) if self.bias0 > 0.0 => l,
            _ => f64::INFINITY,
        }
    }
}

/// Sampling radius `δ_n = delta0 · n^{-decay}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SamplingConfig {
    pub delta0: f64,
    pub decay: f64,
}

/// Outcome of validating a configuration: hard errors abort, warnings are
/// reported and the run proceeds.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Validation {
    pub warnings: Vec<String>,
}

impl ExperimentConfig {
    pub fn from_toml_str(s: &str) -> Result<Self> {
        Ok(toml::from_str(s)?)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        Self::from_toml_str(&std::fs::read_to_string(path)?)
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn stage_game(&self) -> Result<StageGame<f64>> {
        match &self.game {
            GameConfig::BilinearZeroSum { matrix } => StageGame::bilinear_zero_sum(matrix.clone()),
            GameConfig::KellyAuction {
                gains,
                capacity,
                entry_barrier,
                budgets,
            } => {
                StageGame::kelly_auction(gains.clone(), *capacity, *entry_barrier, budgets.clone())
            }
            GameConfig::QuadraticNetwork {
                mu,
                coupling,
                targets,
                lo,
                hi,
            } => StageGame::quadratic_network(*mu, *coupling, targets.clone(), *lo, *hi),
            GameConfig::Linear { payoffs } => StageGame::linear(payoffs.clone()),
        }
    }

    pub fn sequence(&self) -> Result<GameSequence<f64>> {
        let drift = match self.sequence {
            SequenceConfig::Static => Drift::Static,
            SequenceConfig::Stabilizing { beta0, decay } => Drift::Stabilizing { beta0, decay },
            SequenceConfig::Drifting {
                exponent,
                speed,
                amplitude,
            } => Drift::Drifting {
                exponent,
                speed,
                amplitude,
            },
            SequenceConfig::RandomPayoffs { amplitude, seed } => {
                Drift::RandomPayoffs { amplitude, seed }
            }
        };
        GameSequence::new(self.stage_game()?, drift)
    }

    pub fn spsa(&self) -> Result<Option<SpsaConfig<f64>>> {
        match &self.learner {
            LearnerConfig::Bandit { sampling, .. } => Ok(Some(SpsaConfig::for_sets(
                self.stage_game()?.sets(),
                sampling.delta0,
                sampling.decay,
            )?)),
            LearnerConfig::Gradient { .. } => Ok(None),
        }
    }

    /// Checks structure, feasibility of the sampling radius and the
    /// exponent conditions of the target guarantee.
    pub fn validate(&self) -> Result<Validation> {
        if self.horizon == 0 {
            return Err(Error::Config("horizon must be at least 1".into()));
        }
        if self.seeds.is_empty() {
            return Err(Error::Config("at least one seed is required".into()));
        }
        if self.name.is_empty() || self.name.contains(['/', '\\']) {
            return Err(Error::Config(format!(
                "invalid experiment name {:?}",
                self.name
            )));
        }
        let seq = self.sequence()?;
        let reg = crate::geometry::Regularizer::new(self.regularizer);
        for set in seq.sets() {
            reg.check_compatible(set)?;
        }
        self.learner.step().schedule().validate()?;
        if let LearnerConfig::Gradient { noise, .. } = &self.learner {
            noise.schedule().validate()?;
        }
        self.spsa()?;

        let problems = self
            .target
            .map(|t| self.exponent_problems(t))
            .unwrap_or_default();
        if problems.is_empty() {
            return Ok(Validation::default());
        }
        if self.allow_violations {
            Ok(Validation { warnings: problems })
        } else {
            Err(Error::Config(format!(
                "{} (set allow_violations = true to run anyway)",
                problems.join("; ")
            )))
        }
    }

    fn exponent_problems(&self, target: Target) -> Vec<String> {
        let mut out = Vec::new();
        let p = self.learner.step().power_exponent();
        let need_power = |out: &mut Vec<String>| {
            if p.is_none() {
                out.push(format!("target {target:?} needs a power step schedule"));
            }
        };
        let stabilization = match self.sequence {
            SequenceConfig::Static => f64::INFINITY,
            SequenceConfig::Stabilizing { decay, .. } => decay,
            _ => f64::NAN,
        };
        let drift = match self.sequence {
            SequenceConfig::Drifting { exponent, .. } => Some(exponent),
            _ => None,
        };
        let clears = |value: f64, bound: f64| value >= bound + EXPONENT_MARGIN - 1e-12;
        let near = |value: f64, ideal: f64| (value - ideal).abs() <= EXPONENT_MARGIN + 1e-12;

        match target {
            Target::StaticRegret => {
                if !matches!(self.learner.step(), StepConfig::Constant { .. }) {
                    out.push("static regret target expects a constant step".into());
                }
                if !matches!(self.learner, LearnerConfig::Gradient { .. }) {
                    out.push("static regret target expects first-order feedback".into());
                }
            }
            Target::StabilizingConvergence | Target::ErgodicSaddle => {
                need_power(&mut out);
                let LearnerConfig::Gradient { noise, .. } = &self.learner else {
                    out.push(format!("target {target:?} expects first-order feedback"));
                    return out;
                };
                if stabilization.is_nan() {
                    out.push("target needs a static or stabilizing sequence".into());
                }
                if let Some(p) = p {
                    let bound = (1.0 - stabilization).max(1.0 - noise.bias_exponent()).max(
                        if noise.sigma0 > 0.0 {
                            0.5 + noise.sigma_growth
                        } else {
                            f64::NEG_INFINITY
                        },
                    );
                    if p > 1.0 || (bound.is_finite() && !clears(p, bound)) {
                        out.push(format!(
                            "step exponent {p} must lie in ({bound} + {EXPONENT_MARGIN}, 1]"
                        ));
                    }
                }
            }
            Target::Tracking | Target::DynamicRegret => {
                need_power(&mut out);
                let Some(v) = drift else {
                    out.push("target needs a drifting sequence".into());
                    return out;
                };
                if let LearnerConfig::Gradient { noise, .. } = &self.learner {
                    if noise.bias_exponent().is_finite() || noise.sigma_growth != 0.0 {
                        out.push("tuned tracking rate assumes unbiased, bounded noise".into());
                    }
                } else {
                    out.push(format!("target {target:?} expects first-order feedback"));
                }
                if target == Target::DynamicRegret
                    && self.stage_game().map(|g| g.players()).unwrap_or(0) != 1
                {
                    out.push("dynamic regret target is for a single player".into());
                }
                if let Some(p) = p {
                    let ideal = (1.0 - v) / 3.0;
                    if !near(p, ideal) {
                        out.push(format!(
                            "step exponent {p} should be within {EXPONENT_MARGIN} of {ideal}"
                        ));
                    }
                }
            }
            Target::BanditTracking | Target::BanditConvergence => {
                need_power(&mut out);
                let LearnerConfig::Bandit { sampling, .. } = &self.learner else {
                    out.push(format!("target {target:?} expects payoff-based feedback"));
                    return out;
                };
                let q = sampling.decay;
                let Some(p) = p else { return out };
                if target == Target::BanditTracking {
                    let Some(v) = drift else {
                        out.push("target needs a drifting sequence".into());
                        return out;
                    };
                    let (ip, iq) = (3.0 * (1.0 - v) / 5.0, (1.0 - v) / 5.0);
                    if !near(p, ip) {
                        out.push(format!(
                            "step exponent {p} should be within {EXPONENT_MARGIN} of {ip}"
                        ));
                    }
                    if !near(q, iq) {
                        out.push(format!(
                            "sampling exponent {q} should be within {EXPONENT_MARGIN} of {iq}"
                        ));
                    }
                } else {
                    if stabilization.is_nan() {
                        out.push("target needs a static or stabilizing sequence".into());
                    }
                    let bound = (1.0 - stabilization).max(1.0 - q).max(0.5 + q);
                    if p > 1.0 || !clears(p, bound) {
                        out.push(format!(
                            "step exponent {p} must lie in ({bound} + {EXPONENT_MARGIN}, 1]"
                        ));
                    }
                }
            }
        }
        out
    }
}
