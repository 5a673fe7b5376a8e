//! Nash equilibrium oracles and certificates.
//!
//! Equilibria enter the learning guarantees only through the analysis, so
//! everything here is a reference oracle: exact solves for the families that
//! admit one, an extragradient solver for monotone games, and residual
//! checks for the Stampacchia and Minty characterisations.

use rand::Rng;

use crate::games::{GameFamily, Monotonicity, StageGame};
use crate::profile::vec_ops;
use crate::{rng, ActionProfile, Error, Result, Scalar};

/// A candidate equilibrium together with its residuals.
#[derive(Clone, Debug, PartialEq)]
pub struct EquilibriumCertificate<F> {
    pub point: ActionProfile<F>,
    /// `Σ_i max_{x_i} ⟨V_i(x*), x_i − x*_i⟩`; zero exactly at a Nash
    /// equilibrium.
    pub stampacchia_residual: F,
    /// `max ⟨V(x), x − x*⟩` over sampled `x`; non-positive at an equilibrium
    /// of a monotone game.
    pub minty_residual: F,
    pub iterations: usize,
}

const MINTY_SAMPLES: usize = 256;

/// Exact equilibrium for quadratic networks with an interior solution and
/// for the single-bidder Kelly auction.
pub fn nash_closed_form<F: Scalar>(game: &StageGame<F>) -> Result<ActionProfile<F>> {
    if game.perturbation() != F::zero() {
        return Err(Error::Unsupported(
            "perturbed stage games have no closed-form equilibrium".into(),
        ));
    }
    match game.family() {
        GameFamily::QuadraticNetwork {
            mu,
            coupling,
            targets,
            lo,
            hi,
        } => {
            let n = targets.len();
            let dim = targets[0].len();
            let blocks: Vec<Vec<F>> = if n == 1 {
                targets.clone()
            } else {
                // μ x_i + β Σ_{j≠i} x_j = μ θ_i, solved through the total S = Σ_j x_j.
                let nf = F::from_usize_lossy(n);
                let totals: Vec<F> = (0..dim)
                    .map(|k| {
                        let theta_sum: F = targets.iter().map(|t| t[k]).sum();
                        *mu * theta_sum / (*mu + (nf - F::one()) * *coupling)
                    })
                    .collect();
                targets
                    .iter()
                    .map(|t| {
                        t.iter()
                            .zip(&totals)
                            .map(|(&th, &s)| (*mu * th - *coupling * s) / (*mu - *coupling))
                            .collect()
                    })
                    .collect()
            };
            let eps = F::tolerance();
            if blocks
                .iter()
                .flatten()
                .any(|&v| v < *lo - eps || v > *hi + eps)
            {
                return Err(Error::Unsupported(
                    "quadratic network equilibrium is not interior to the box".into(),
                ));
            }
            Ok(ActionProfile::new(blocks))
        }
        GameFamily::KellyAuction { .. } if game.players() == 1 => {
            let x = ActionProfile::single(vec![F::zero()]);
            Ok(ActionProfile::single(
                game.best_response(0, &x)
                    .expect("kelly best response is closed form"),
            ))
        }
        _ => Err(Error::Unsupported(
            "no closed-form equilibrium for this game family".into(),
        )),
    }
}

/// `Σ_i max_{x_i ∈ X_i} ⟨V_i(x*), x_i − x*_i⟩`, computed exactly with the
/// support function of each action set.
pub fn stampacchia_residual<F: Scalar>(game: &StageGame<F>, x: &ActionProfile<F>) -> F {
    let v = game.gradient(x);
    (0..game.players())
        .map(|i| {
            let (_, best) = game.set(i).support_max(v.block(i));
            best - vec_ops::dot(v.block(i), x.block(i))
        })
        .sum::<F>()
        .max(F::zero())
}

/// `max ⟨V(x), x − x*⟩` over `samples` points drawn from the action space.
pub fn minty_residual<F: Scalar, R: Rng + ?Sized>(
    game: &StageGame<F>,
    eq: &ActionProfile<F>,
    samples: usize,
    rng: &mut R,
) -> F {
    let mut worst = F::neg_infinity();
    for _ in 0..samples {
        let x = ActionProfile::new(game.sets().iter().map(|s| s.sample(rng)).collect());
        let v = game.gradient(&x);
        worst = worst.max(v.dot(&x.sub(eq)));
    }
    worst
}

/// Extragradient from the barycenter of the action space.
pub fn nash_extragradient<F: Scalar>(
    game: &StageGame<F>,
    tol: F,
    max_iters: usize,
) -> Result<EquilibriumCertificate<F>> {
    let start = ActionProfile::new(game.sets().iter().map(|s| s.barycenter()).collect());
    nash_extragradient_from(game, &start, tol, max_iters)
}

/// Extragradient `x ← Π(x + γ V(Π(x + γ V(x))))` with `γ = 1/(2Λ)`.
///
/// For games that are merely monotone the returned point is the running
/// average of the extrapolated iterates, since the last iterate need not
/// converge there.
pub fn nash_extragradient_from<F: Scalar>(
    game: &StageGame<F>,
    start: &ActionProfile<F>,
    tol: F,
    max_iters: usize,
) -> Result<EquilibriumCertificate<F>> {
    game.check_profile(start)?;
    let lipschitz = game.lipschitz();
    if !(lipschitz > F::zero()) {
        return Err(Error::Unsupported(
            "extragradient needs a positive Lipschitz constant".into(),
        ));
    }
    let step = F::one() / (F::lit(2.0) * lipschitz);
    let averaged = matches!(game.monotonicity(), Monotonicity::Monotone);
    let project = |x: &ActionProfile<F>| {
        ActionProfile::new(
            game.sets()
                .iter()
                .enumerate()
                .map(|(i, s)| s.project(x.block(i)))
                .collect(),
        )
    };

    let mut x = project(start);
    let mut avg = x.zeros_like();
    let mut residual = F::infinity();
    for k in 1..=max_iters {
        let mut lead = x.clone();
        lead.add_scaled(step, &game.gradient(&x));
        let lead = project(&lead);
        let mut next = x.clone();
        next.add_scaled(step, &game.gradient(&lead));
        x = project(&next);

        let candidate = if averaged {
            let w = F::one() / F::from_usize_lossy(k);
            avg.add_scaled(F::one(), &lead.sub(&avg).scaled(w));
            &avg
        } else {
            &x
        };
        residual = stampacchia_residual(game, candidate);
        if residual <= tol {
            let point = candidate.clone();
            let mut draw = rng::stream(0, 0);
            let minty_residual = minty_residual(game, &point, MINTY_SAMPLES, &mut draw);
            return Ok(EquilibriumCertificate {
                point,
                stampacchia_residual: residual,
                minty_residual,
                iterations: k,
            });
        }
    }
    Err(Error::Convergence {
        iterations: max_iters,
        residual: residual.to_f64_lossy(),
    })
}

/// Duality gap `max_j (Aᵀx₁)_j − min_i (A x₂)_i` of a bilinear zero-sum game;
/// non-negative, and zero exactly at saddle points.
pub fn saddle_gap<F: Scalar>(game: &StageGame<F>, x: &ActionProfile<F>) -> Result<F> {
    let GameFamily::BilinearZeroSum { matrix } = game.family() else {
        return Err(Error::Unsupported(
            "saddle gap is defined for bilinear zero-sum games".into(),
        ));
    };
    game.check_profile(x)?;
    let (x1, x2) = (x.block(0), x.block(1));
    let best_col = (0..matrix[0].len())
        .map(|j| matrix.iter().zip(x1).map(|(row, &w)| row[j] * w).sum::<F>())
        .fold(F::neg_infinity(), F::max);
    let best_row = matrix
        .iter()
        .map(|row| vec_ops::dot(row, x2))
        .fold(F::infinity(), F::min);
    Ok(best_col - best_row)
}
