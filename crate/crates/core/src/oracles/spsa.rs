use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::games::StageGame;
use crate::geometry::ActionSet;
use crate::rng::{self, tag};
use crate::{ActionProfile, DualVector, Error, Result, Scalar};

/// Sampling schedule and safety geometry of the one-point estimator.
///
/// Player `i` queries `x̂_i = (1 − δ_n/r_i) x_i + (δ_n/r_i)(p_i + r_i z_i)`
/// where `p_i` is the barycenter of `X_i`, `r_i` the radius of the largest
/// ball around `p_i` inside `X_i`, and `z_i` a random signed direction of an
/// orthonormal basis of the set's tangent space. The query is feasible
/// whenever `δ_n < r_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpsaConfig<F> {
    delta0: F,
    decay: F,
    radii: Vec<F>,
    bases: Vec<Vec<F>>,
    directions: Vec<Vec<Vec<F>>>,
}

impl<F: Scalar> SpsaConfig<F> {
    /// Configuration with `δ_n = delta0 · n^{-decay}`, `decay ∈ (0, 1]`.
    pub fn for_sets(sets: &[ActionSet<F>], delta0: F, decay: F) -> Result<Self> {
        if !(delta0 > F::zero()) || !(decay > F::zero() && decay <= F::one()) {
            return Err(Error::Config(format!(
                "sampling radius needs delta0 > 0 and decay in (0, 1], got {delta0} and {decay}"
            )));
        }
        let radii: Vec<F> = sets.iter().map(ActionSet::inradius).collect();
        // δ_n is non-increasing, so checking n = 1 covers every stage.
        if let Some((i, r)) = radii.iter().enumerate().find(|(_, &r)| !(delta0 < r)) {
            return Err(Error::Config(format!(
                "sampling radius delta0 = {delta0} must be below the safety radius {r} of player {i}"
            )));
        }
        Ok(Self {
            delta0,
            decay,
            radii,
            bases: sets.iter().map(ActionSet::barycenter).collect(),
            directions: sets.iter().map(ActionSet::perturbation_basis).collect(),
        })
    }

    pub fn delta0(&self) -> F {
        self.delta0
    }

    pub fn decay(&self) -> F {
        self.decay
    }

    pub fn radii(&self) -> &[F] {
        &self.radii
    }

    pub fn bases(&self) -> &[Vec<F>] {
        &self.bases
    }

    /// Number of perturbation directions available to player `i`.
    pub fn directions(&self, i: usize) -> usize {
        self.directions[i].len()
    }

    /// `δ_n`.
    pub fn radius_at(&self, n: usize) -> F {
        self.delta0 * F::from_usize_lossy(n).powf(-self.decay)
    }

    /// Query point of player `i` for candidate `x_i`, direction `z_i` and
    /// sampling radius `delta`.
    pub fn query_point(&self, i: usize, x: &[F], z: &[F], delta: F) -> Vec<F> {
        let t = delta / self.radii[i];
        x.iter()
            .zip(&self.bases[i])
            .zip(z)
            .map(|((&xj, &pj), &zj)| (F::one() - t) * xj + t * (pj + self.radii[i] * zj))
            .collect()
    }

    /// Upper bound `C` on `‖x̂ − x‖ / δ_n`.
    pub fn displacement_constant(&self, sets: &[ActionSet<F>]) -> F {
        sets.iter()
            .zip(&self.radii)
            .map(|(s, &r)| s.diameter() / r + F::one())
            .fold(F::zero(), F::max)
    }
}

/// One round of payoff-based feedback.
#[derive(Clone, Debug, PartialEq)]
pub struct SpsaFeedback<F> {
    /// The action profile actually played.
    pub realized: ActionProfile<F>,
    /// `û_i = u_i(x̂)`.
    pub payoffs: Vec<F>,
    /// `v̂_i = (m_i/δ_n) û_i z_i` with `m_i` the number of directions.
    pub signal: DualVector<F>,
    pub directions: DualVector<F>,
    pub radius: F,
}

/// SPSA estimator with one direction stream per player.
#[derive(Clone, Debug)]
pub struct SpsaOracle<F> {
    config: SpsaConfig<F>,
    streams: Vec<ChaCha8Rng>,
}

impl<F: Scalar> SpsaOracle<F> {
    pub fn new(config: SpsaConfig<F>, seed: u64) -> Self {
        let streams = (0..config.radii.len())
            .map(|i| rng::stream(seed, tag::SPSA_DIRECTIONS + i as u64))
            .collect();
        Self { config, streams }
    }

    pub fn config(&self) -> &SpsaConfig<F> {
        &self.config
    }

    pub fn feedback(
        &mut self,
        game: &StageGame<F>,
        x: &ActionProfile<F>,
        n: usize,
    ) -> SpsaFeedback<F> {
        let delta = self.config.radius_at(n);
        let directions: Vec<Vec<F>> = self
            .streams
            .iter_mut()
            .zip(&self.config.directions)
            .map(|(stream, basis)| {
                let pick = stream.random_range(0..2 * basis.len());
                let (k, negative) = (pick / 2, pick % 2 == 1);
                basis[k]
                    .iter()
                    .map(|&v| if negative { -v } else { v })
                    .collect()
            })
            .collect();
        let realized = ActionProfile::new(
            directions
                .iter()
                .enumerate()
                .map(|(i, z)| self.config.query_point(i, x.block(i), z, delta))
                .collect(),
        );
        let payoffs: Vec<F> = (0..game.players())
            .map(|i| game.payoff(i, &realized))
            .collect();
        let signal = DualVector::new(
            directions
                .iter()
                .enumerate()
                .map(|(i, z)| {
                    let scale = F::from_usize_lossy(self.config.directions(i)) / delta * payoffs[i];
                    z.iter().map(|&v| scale * v).collect()
                })
                .collect(),
        );
        SpsaFeedback {
            realized,
            payoffs,
            signal,
            directions: DualVector::new(directions),
            radius: delta,
        }
    }
}
