//! Mirror-descent geometry: action sets, distance-generating functions,
//! Bregman divergences and prox-mappings.
//!
//! Geometry objects are immutable after construction and all operations
//! are pure, so they can be shared freely across threads.

mod regularizer;
mod set;

pub use regularizer::{BregmanValue, Regularizer, RegularizerKind};
pub use set::{ActionSet, SetKind};

use crate::{ActionProfile, DualVector, Result, Scalar};

/// Collective prox-mapping: the product of the per-player prox-maps.
pub fn prox_profile<F: Scalar>(
    reg: &Regularizer,
    sets: &[ActionSet<F>],
    x: &ActionProfile<F>,
    y: &DualVector<F>,
) -> Result<ActionProfile<F>> {
    let blocks = sets
        .iter()
        .enumerate()
        .map(|(i, set)| reg.prox(set, x.block(i), y.block(i)))
        .collect::<Result<Vec<_>>>()?;
    Ok(ActionProfile::new(blocks))
}

/// `Σ_i D_i(p_i, x_i)`.
pub fn bregman_profile<F: Scalar>(
    reg: &Regularizer,
    sets: &[ActionSet<F>],
    p: &ActionProfile<F>,
    x: &ActionProfile<F>,
) -> Result<F> {
    sets.iter()
        .enumerate()
        .map(|(i, set)| Ok(reg.bregman(set, p.block(i), x.block(i))?.value()))
        .sum()
}

pub fn dgf_min_profile<F: Scalar>(
    reg: &Regularizer,
    sets: &[ActionSet<F>],
) -> Result<ActionProfile<F>> {
    let blocks = sets
        .iter()
        .map(|set| reg.dgf_min(set))
        .collect::<Result<Vec<_>>>()?;
    Ok(ActionProfile::new(blocks))
}

/// Membership of every block in its set.
pub fn profile_feasible<F: Scalar>(sets: &[ActionSet<F>], x: &ActionProfile<F>) -> bool {
    x.players() == sets.len() && sets.iter().enumerate().all(|(i, s)| s.contains(x.block(i)))
}

/// `diam(X)` of the product set under the block Euclidean norm.
pub fn product_diameter<F: Scalar>(sets: &[ActionSet<F>]) -> F {
    sets.iter()
        .map(|s| {
            let d = s.diameter();
            d * d
        })
        .sum::<F>()
        .sqrt()
}
