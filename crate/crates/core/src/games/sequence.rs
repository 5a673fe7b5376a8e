use rand::Rng;

use super::stage::{GameFamily, StageGame};
use crate::rng;
use crate::{Error, Result, Scalar};

/// How the stage games evolve with `n`.
#[derive(Clone, Debug, PartialEq)]
pub enum Drift<F> {
    /// `G_n = G` for all `n`.
    Static,
    /// `V_n = V + β_n P` with `β_n = beta0 · n^{-decay}` and `‖P‖ ≤ 1`.
    Stabilizing { beta0: F, decay: F },
    /// Quadratic targets move along a triangle wave of half-width
    /// `amplitude` with arc length `speed · n^exponent`, so the cumulative
    /// equilibrium variation grows like `T^exponent`.
    Drifting { exponent: F, speed: F, amplitude: F },
    /// Linear payoff vectors `c_n = c + amplitude · (U_n − ½)` with `U_n`
    /// uniform on `[0,1]^d`, drawn from a seeded stream.
    RandomPayoffs { amplitude: F, seed: u64 },
}

/// A time-varying game `n ↦ G_n`.
#[derive(Clone, Debug, PartialEq)]
pub struct GameSequence<F> {
    base: StageGame<F>,
    drift: Drift<F>,
}

impl<F: Scalar> GameSequence<F> {
    pub fn new(base: StageGame<F>, drift: Drift<F>) -> Result<Self> {
        match &drift {
            Drift::Static => {}
            Drift::Stabilizing { beta0, decay } => {
                if !(*beta0 >= F::zero()) || !(*decay > F::zero()) {
                    return Err(Error::InvalidInput(
                        "stabilizing drift needs beta0 >= 0 and decay > 0".into(),
                    ));
                }
            }
            Drift::Drifting {
                exponent,
                speed,
                amplitude,
            } => {
                if !matches!(base.family(), GameFamily::QuadraticNetwork { .. }) {
                    return Err(Error::Unsupported(
                        "drifting sequences are defined for quadratic networks only".into(),
                    ));
                }
                if !(*exponent > F::zero() && *exponent < F::one())
                    || !(*speed > F::zero())
                    || !(*amplitude > F::zero())
                {
                    return Err(Error::InvalidInput(
                        "drifting sequence needs 0 < exponent < 1, speed > 0 and amplitude > 0"
                            .into(),
                    ));
                }
            }
            Drift::RandomPayoffs { amplitude, .. } => {
                if !matches!(base.family(), GameFamily::Linear { .. }) {
                    return Err(Error::Unsupported(
                        "random payoff streams are defined for linear games only".into(),
                    ));
                }
                if !(*amplitude >= F::zero()) {
                    return Err(Error::InvalidInput("payoff amplitude must be >= 0".into()));
                }
            }
        }
        Ok(Self { base, drift })
    }

    pub fn constant(game: StageGame<F>) -> Self {
        Self {
            base: game,
            drift: Drift::Static,
        }
    }

    pub fn base(&self) -> &StageGame<F> {
        &self.base
    }

    pub fn drift(&self) -> &Drift<F> {
        &self.drift
    }

    pub fn players(&self) -> usize {
        self.base.players()
    }

    pub fn sets(&self) -> &[crate::geometry::ActionSet<F>] {
        self.base.sets()
    }

    /// Stage game `G_n`, `n ≥ 1`.
    pub fn stage(&self, n: usize) -> Result<StageGame<F>> {
        if n == 0 {
            return Err(Error::InvalidInput("stages are numbered from 1".into()));
        }
        let nf = F::from_usize_lossy(n);
        match &self.drift {
            Drift::Static => Ok(self.base.clone()),
            Drift::Stabilizing { .. } => {
                let beta = self.stabilization_bound(n).unwrap_or_else(F::zero);
                Ok(self.base.clone().with_perturbation(beta))
            }
            Drift::Drifting {
                exponent,
                speed,
                amplitude,
            } => {
                let GameFamily::QuadraticNetwork { targets, .. } = self.base.family() else {
                    unreachable!("checked at construction")
                };
                let arc = *speed * nf.powf(*exponent);
                let players = F::from_usize_lossy(targets.len());
                let moved = targets
                    .iter()
                    .enumerate()
                    .map(|(i, t)| {
                        // Players start spread over one period of the wave.
                        let phase = F::lit(4.0) * *amplitude * F::from_usize_lossy(i) / players;
                        let offset = triangle_wave(arc + phase, *amplitude);
                        let scale = offset / F::from_usize_lossy(t.len()).sqrt();
                        t.iter().map(|&c| c + scale).collect()
                    })
                    .collect();
                self.base.clone().with_targets(moved)
            }
            Drift::RandomPayoffs { amplitude, seed } => {
                let GameFamily::Linear { payoffs } = self.base.family() else {
                    unreachable!("checked at construction")
                };
                let mut draw = rng::indexed(*seed, rng::tag::PAYOFF_STREAM, n as u64);
                let c = payoffs
                    .iter()
                    .map(|&m| m + *amplitude * (F::lit(draw.random::<f64>()) - F::lit(0.5)))
                    .collect();
                self.base.clone().with_linear_payoffs(c)
            }
        }
    }

    /// `β_n = max_x ‖V_n(x) − V(x)‖` for stabilizing sequences (zero for
    /// static ones). `None` when the sequence has no limit game.
    pub fn stabilization_bound(&self, n: usize) -> Option<F> {
        match &self.drift {
            Drift::Static => Some(F::zero()),
            Drift::Stabilizing { beta0, decay } => {
                Some(*beta0 * F::from_usize_lossy(n.max(1)).powf(-*decay))
            }
            _ => None,
        }
    }

    /// The game the sequence converges to, if any.
    pub fn limit_game(&self) -> Option<StageGame<F>> {
        match &self.drift {
            Drift::Static | Drift::Stabilizing { .. } => Some(self.base.clone()),
            _ => None,
        }
    }
}

/// Unit-speed triangle wave in `[-amplitude, amplitude]`, equal to
/// `-amplitude` at `s = 0`.
fn triangle_wave<F: Scalar>(s: F, amplitude: F) -> F {
    let period = F::lit(4.0) * amplitude;
    let u = s - (s / period).floor() * period;
    if u < F::lit(2.0) * amplitude {
        u - amplitude
    } else {
        F::lit(3.0) * amplitude - u
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quad() -> StageGame<f64> {
        StageGame::quadratic_network(1.0, 0.2, vec![vec![0.45], vec![0.55]], 0.0, 1.0).unwrap()
    }

    #[test]
    fn static_sequence_is_constant() {
        let seq = GameSequence::constant(quad());
        assert_eq!(seq.stage(1).unwrap(), seq.stage(1000).unwrap());
        assert!(seq.stage(0).is_err());
    }

    #[test]
    fn stabilizing_decay_schedule() {
        let seq = GameSequence::new(
            quad(),
            Drift::Stabilizing {
                beta0: 0.4,
                decay: 0.5,
            },
        )
        .unwrap();
        assert!((seq.stabilization_bound(100).unwrap() - 0.04).abs() < 1e-15);
        assert!((seq.stage(100).unwrap().perturbation() - 0.04).abs() < 1e-15);
        assert_eq!(seq.limit_game().unwrap(), quad());
    }

    #[test]
    fn triangle_wave_moves_at_unit_speed() {
        let a = 0.25;
        for k in 0..400 {
            let s = k as f64 * 0.01;
            let w = triangle_wave(s, a);
            assert!(w >= -a - 1e-15 && w <= a + 1e-15);
            let step = (triangle_wave(s + 0.001, a) - w).abs();
            assert!(step <= 0.001 + 1e-12);
        }
        assert!((triangle_wave(0.0, a) + a).abs() < 1e-15);
        assert!((triangle_wave(0.5, a) - a).abs() < 1e-15);
    }

    #[test]
    fn drifting_requires_quadratic_family() {
        let lin = StageGame::linear(vec![0.0, 1.0]).unwrap();
        let drift = Drift::Drifting {
            exponent: 0.5,
            speed: 1.0,
            amplitude: 0.1,
        };
        assert!(GameSequence::new(lin, drift).is_err());
    }

    #[test]
    fn random_payoffs_are_reproducible_and_bounded() {
        let base = StageGame::linear(vec![0.5; 4]).unwrap();
        let seq = GameSequence::new(
            base,
            Drift::RandomPayoffs {
                amplitude: 0.5,
                seed: 9,
            },
        )
        .unwrap();
        let a = seq.stage(17).unwrap();
        assert_eq!(a, seq.stage(17).unwrap());
        assert_ne!(a, seq.stage(18).unwrap());
        let GameFamily::Linear { payoffs } = a.family() else {
            panic!()
        };
        assert!(payoffs.iter().all(|&c| (0.25..=0.75).contains(&c)));
    }
}
