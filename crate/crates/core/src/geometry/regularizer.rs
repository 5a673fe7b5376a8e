use serde::{Deserialize, Serialize};

use super::set::{ActionSet, SetKind};
use crate::profile::vec_ops;
use crate::{Error, Result, Scalar};

/// Distance-generating function family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RegularizerKind {
    /// `h(x) = ½‖x‖²`; the prox-mapping is a Euclidean projection.
    Euclidean,
    /// Negative entropy `h(x) = Σ x_j log x_j` on the simplex; the
    /// prox-mapping is the multiplicative-weights update.
    Entropic,
}

/// A Bregman divergence value `D(p, x) ≥ 0`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct BregmanValue<F>(F);

impl<F: Scalar> BregmanValue<F> {
    pub fn value(self) -> F {
        self.0
    }
}

/// A distance-generating function together with its Bregman divergence and
/// prox-mapping. Both kinds are 1-strongly convex with respect to the
/// Euclidean norm.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Regularizer {
    kind: RegularizerKind,
}

impl Regularizer {
    pub const fn new(kind: RegularizerKind) -> Self {
        Self { kind }
    }

    pub const fn euclidean() -> Self {
        Self::new(RegularizerKind::Euclidean)
    }

    pub const fn entropic() -> Self {
        Self::new(RegularizerKind::Entropic)
    }

    pub fn kind(&self) -> RegularizerKind {
        self.kind
    }

    /// Strong-convexity modulus `K`.
    pub fn modulus<F: Scalar>(&self) -> F {
        F::one()
    }

    /// Entropic regularization is only defined on simplices.
    pub fn check_compatible<F: Scalar>(&self, set: &ActionSet<F>) -> Result<()> {
        match (self.kind, set.kind()) {
            (RegularizerKind::Entropic, SetKind::Simplex { .. })
            | (RegularizerKind::Euclidean, _) => Ok(()),
            (RegularizerKind::Entropic, _) => Err(Error::InvalidInput(
                "the entropic regularizer requires a simplex action set".into(),
            )),
        }
    }

    /// Whether `x` lies in the domain of `∂h`: the whole set for the
    /// Euclidean kind, the floored relative interior for the entropic kind.
    pub fn in_prox_domain<F: Scalar>(&self, set: &ActionSet<F>, x: &[F]) -> bool {
        match self.kind {
            RegularizerKind::Euclidean => set.contains(x),
            RegularizerKind::Entropic => {
                set.is_simplex()
                    && set.contains_tol(x, F::lit(1e-9).max(F::tolerance()))
                    && x.iter().all(|&v| v >= F::entropic_floor())
            }
        }
    }

    fn require_domain<F: Scalar>(&self, set: &ActionSet<F>, x: &[F]) -> Result<()> {
        self.check_compatible(set)?;
        if self.in_prox_domain(set, x) {
            Ok(())
        } else {
            Err(Error::Domain(format!(
                "{x:?} is outside the prox-domain of the {:?} regularizer",
                self.kind
            )))
        }
    }

    /// `h(x)`, with `0 log 0 = 0`.
    pub fn value<F: Scalar>(&self, x: &[F]) -> F {
        match self.kind {
            RegularizerKind::Euclidean => vec_ops::norm_sq(x) / F::lit(2.0),
            RegularizerKind::Entropic => x
                .iter()
                .filter(|&&v| v > F::zero())
                .map(|&v| v * v.ln())
                .sum(),
        }
    }

    /// `∇h(x)` on the prox-domain.
    pub fn gradient<F: Scalar>(&self, set: &ActionSet<F>, x: &[F]) -> Result<Vec<F>> {
        self.require_domain(set, x)?;
        Ok(match self.kind {
            RegularizerKind::Euclidean => x.to_vec(),
            RegularizerKind::Entropic => x.iter().map(|&v| v.ln() + F::one()).collect(),
        })
    }

    /// Depth `H = max h − min h` over the set.
    pub fn depth<F: Scalar>(&self, set: &ActionSet<F>) -> F {
        let half = F::lit(0.5);
        match (self.kind, set.kind()) {
            (RegularizerKind::Entropic, SetKind::Simplex { dim }) => F::from_usize_lossy(*dim).ln(),
            (RegularizerKind::Entropic, _) => F::nan(),
            (RegularizerKind::Euclidean, SetKind::Simplex { dim }) => {
                half * (F::one() - F::one() / F::from_usize_lossy(*dim))
            }
            (RegularizerKind::Euclidean, SetKind::Box { lo, hi }) => {
                let max: F = lo.iter().zip(hi).map(|(&l, &h)| (l * l).max(h * h)).sum();
                let min: F = lo
                    .iter()
                    .zip(hi)
                    .map(|(&l, &h)| {
                        let c = F::zero().max(l).min(h);
                        c * c
                    })
                    .sum();
                half * (max - min)
            }
            (RegularizerKind::Euclidean, SetKind::Ball { center, radius }) => {
                let c = vec_ops::norm(center);
                let far = c + *radius;
                let near = (c - *radius).max(F::zero());
                half * (far * far - near * near)
            }
        }
    }

    /// `D(p, x) = h(p) − h(x) − ⟨∇h(x), p − x⟩`.
    pub fn bregman<F: Scalar>(
        &self,
        set: &ActionSet<F>,
        p: &[F],
        x: &[F],
    ) -> Result<BregmanValue<F>> {
        self.require_domain(set, x)?;
        if p.len() != x.len() || !set.contains_tol(p, F::lit(1e-9).max(F::tolerance())) {
            return Err(Error::Domain(format!(
                "{p:?} is not a point of the action set"
            )));
        }
        let value = match self.kind {
            RegularizerKind::Euclidean => vec_ops::norm_sq(&vec_ops::sub(p, x)) / F::lit(2.0),
            RegularizerKind::Entropic => p
                .iter()
                .zip(x)
                .map(|(&pj, &xj)| {
                    let log_term = if pj > F::zero() {
                        pj * (pj / xj).ln()
                    } else {
                        F::zero()
                    };
                    log_term - pj + xj
                })
                .sum(),
        };
        // Cancellation can leave a tiny negative residue.
        Ok(BregmanValue(value.max(F::zero())))
    }

    /// Prox-mapping `argmin_{x'} { ⟨y, x − x'⟩ + D(x', x) }`.
    pub fn prox<F: Scalar>(&self, set: &ActionSet<F>, x: &[F], y: &[F]) -> Result<Vec<F>> {
        if y.len() != x.len() || y.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "dual step {y:?} is not a finite vector"
            )));
        }
        self.require_domain(set, x)?;
        Ok(match self.kind {
            RegularizerKind::Euclidean => {
                let shifted: Vec<F> = x.iter().zip(y).map(|(&a, &b)| a + b).collect();
                set.project(&shifted)
            }
            RegularizerKind::Entropic => entropic_update(x, y),
        })
    }

    /// Minimizer of `h` over the set: the starting point of prox-learning.
    pub fn dgf_min<F: Scalar>(&self, set: &ActionSet<F>) -> Result<Vec<F>> {
        self.check_compatible(set)?;
        Ok(match self.kind {
            RegularizerKind::Euclidean => set.project(&vec![F::zero(); set.dim()]),
            RegularizerKind::Entropic => set.barycenter(),
        })
    }

    /// Residual of the three-point identity
    /// `D(a,x) = D(a,x') + D(x',x) + ⟨∇h(x) − ∇h(x'), x' − a⟩`.
    pub fn three_point_residual<F: Scalar>(
        &self,
        set: &ActionSet<F>,
        a: &[F],
        x: &[F],
        x_prime: &[F],
    ) -> Result<F> {
        let lhs = self.bregman(set, a, x)?.value();
        let d_ax = self.bregman(set, a, x_prime)?.value();
        let d_xx = self.bregman(set, x_prime, x)?.value();
        let gx = self.gradient(set, x)?;
        let gxp = self.gradient(set, x_prime)?;
        let cross: F = gx
            .iter()
            .zip(&gxp)
            .zip(x_prime.iter().zip(a))
            .map(|((&g1, &g2), (&xp, &aj))| (g1 - g2) * (xp - aj))
            .sum();
        Ok((lhs - d_ax - d_xx - cross).abs())
    }
}

/// Multiplicative-weights step `x_j e^{y_j} / Σ_k x_k e^{y_k}` in log space.
fn entropic_update<F: Scalar>(x: &[F], y: &[F]) -> Vec<F> {
    let shift = y.iter().copied().fold(F::neg_infinity(), F::max);
    let mut out: Vec<F> = x
        .iter()
        .zip(y)
        .map(|(&a, &b)| a * (b - shift).exp())
        .collect();
    normalize_floored(&mut out);
    out
}

fn normalize_floored<F: Scalar>(v: &mut [F]) {
    let floor = F::entropic_floor();
    for _ in 0..2 {
        let sum: F = v.iter().copied().sum();
        for x in v.iter_mut() {
            *x = (*x / sum).max(floor);
        }
    }
}
