use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::games::StageGame;
use crate::rng::{self, tag};
use crate::{ActionProfile, DualVector, Error, Result, Scalar};

/// Bias and noise statistics of the first-order oracle at stage `n`:
/// bias magnitude `b_n = bias0 · n^{-bias_decay}` along a fixed unit
/// direction and zero-mean Gaussian noise with `E‖ξ_n‖² = σ_n²`,
/// `σ_n = sigma0 · n^{sigma_growth}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NoiseSchedule<F> {
    pub bias0: F,
    /// `None` means the oracle is unbiased.
    pub bias_decay: Option<F>,
    pub sigma0: F,
    pub sigma_growth: F,
}

impl<F: Scalar> NoiseSchedule<F> {
    /// Unbiased and noiseless.
    pub fn perfect() -> Self {
        Self::unbiased(F::zero())
    }

    pub fn unbiased(sigma0: F) -> Self {
        Self {
            bias0: F::zero(),
            bias_decay: None,
            sigma0,
            sigma_growth: F::zero(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.bias0 >= F::zero()
            && self.sigma0 >= F::zero()
            && self.sigma_growth >= F::zero()
            && self.bias_decay.is_none_or(|l| l >= F::zero());
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidInput(format!(
                "invalid noise schedule {self:?}"
            )))
        }
    }

    pub fn bias_at(&self, n: usize) -> F {
        match self.bias_decay {
            Some(decay) if self.bias0 > F::zero() => {
                self.bias0 * F::from_usize_lossy(n).powf(-decay)
            }
            _ => F::zero(),
        }
    }

    pub fn sigma_at(&self, n: usize) -> F {
        self.sigma0 * F::from_usize_lossy(n).powf(self.sigma_growth)
    }

    /// Mean-square bound `s̄_n² = M_n² + σ_n²` given a gradient bound `B`,
    /// with `M_n = B + b_n`.
    pub fn mean_square_bound(&self, gradient_bound: F, n: usize) -> F {
        let m = gradient_bound + self.bias_at(n);
        let s = self.sigma_at(n);
        m * m + s * s
    }
}

/// Oracle output `v̂ = V(x) + bias + noise`. Only `signal` is meant for the
/// learner; the decomposition is kept for diagnostics.
#[derive(Clone, Debug, PartialEq)]
pub struct FeedbackSignal<F> {
    pub signal: DualVector<F>,
    pub gradient: DualVector<F>,
    pub bias: DualVector<F>,
    pub noise: DualVector<F>,
}

/// Stochastic first-order oracle with one noise stream per player.
#[derive(Clone, Debug)]
pub struct FirstOrderOracle<F> {
    schedule: NoiseSchedule<F>,
    bias_direction: DualVector<F>,
    streams: Vec<ChaCha8Rng>,
}

impl<F: Scalar> FirstOrderOracle<F> {
    pub fn new(schedule: NoiseSchedule<F>, dims: &[usize], seed: u64) -> Result<Self> {
        schedule.validate()?;
        let mut draw = rng::stream(seed, tag::BIAS_DIRECTION);
        let raw: Vec<Vec<f64>> = dims
            .iter()
            .map(|&d| (0..d).map(|_| draw.sample(StandardNormal)).collect())
            .collect();
        let norm = raw
            .iter()
            .flatten()
            .map(|v| v * v)
            .sum::<f64>()
            .sqrt()
            .max(1e-300);
        let bias_direction = DualVector::new(
            raw.iter()
                .map(|b| b.iter().map(|v| F::lit(v / norm)).collect())
                .collect(),
        );
        let streams = (0..dims.len())
            .map(|i| rng::stream(seed, tag::SFO_NOISE + i as u64))
            .collect();
        Ok(Self {
            schedule,
            bias_direction,
            streams,
        })
    }

    pub fn schedule(&self) -> &NoiseSchedule<F> {
        &self.schedule
    }

    pub fn bias_direction(&self) -> &DualVector<F> {
        &self.bias_direction
    }

    /// Feedback for the profile `x` of stage game `game` at stage `n`.
    pub fn feedback(
        &mut self,
        game: &StageGame<F>,
        x: &ActionProfile<F>,
        n: usize,
    ) -> FeedbackSignal<F> {
        let gradient = game.gradient(x);
        let bias = self.bias_direction.scaled(self.schedule.bias_at(n));
        let sigma = self.schedule.sigma_at(n);
        let noise = if sigma > F::zero() {
            let scale = sigma / F::from_usize_lossy(gradient.total_dim()).sqrt();
            DualVector::new(
                gradient
                    .blocks()
                    .iter()
                    .zip(self.streams.iter_mut())
                    .map(|(b, stream)| {
                        b.iter()
                            .map(|_| scale * F::lit(stream.sample::<f64, _>(StandardNormal)))
                            .collect()
                    })
                    .collect(),
            )
        } else {
            gradient.zeros_like()
        };
        let signal = gradient.add(&bias).add(&noise);
        FeedbackSignal {
            signal,
            gradient,
            bias,
            noise,
        }
    }
}
