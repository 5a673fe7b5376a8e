use crate::geometry::{ActionSet, SetKind};
use crate::profile::vec_ops;
use crate::{ActionProfile, DualVector, Error, Result, Scalar};

/// Monotonicity class of the joint gradient field `V`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Monotonicity<F> {
    /// `⟨V(x') − V(x), x' − x⟩ ≤ 0`.
    Monotone,
    /// Strict inequality off the diagonal.
    Strict,
    /// `⟨V(x') − V(x), x' − x⟩ ≤ −μ‖x' − x‖²` with the given `μ > 0`.
    Strong(F),
}

/// Concrete payoff structure of a stage game.
#[derive(Clone, Debug, PartialEq)]
pub enum GameFamily<F> {
    /// Two players on simplices; player 1 receives `−x₁ᵀ A x₂`, player 2
    /// receives `x₁ᵀ A x₂`.
    BilinearZeroSum { matrix: Vec<Vec<F>> },
    /// Proportional resource allocation: bidder `i` on `[0, b_i]` receives
    /// `g_i q x_i / (c + Σ_j x_j) − x_i`.
    KellyAuction {
        gains: Vec<F>,
        capacity: F,
        entry_barrier: F,
        budgets: Vec<F>,
    },
    /// `u_i(x) = −(μ/2)‖x_i − θ_i‖² − β ⟨x_i, Σ_{j≠i} x_j⟩` on boxes
    /// `[lo, hi]^d`, with `|β|(N−1) < μ`.
    QuadraticNetwork {
        mu: F,
        coupling: F,
        targets: Vec<Vec<F>>,
        lo: F,
        hi: F,
    },
    /// A single player on the simplex with linear payoff `⟨c, x⟩`.
    Linear { payoffs: Vec<F> },
}

/// One stage game `G_n`: payoffs, individual gradients and the metadata the
/// analysis relies on.
///
/// A stage may carry a smooth perturbation of size `β`: player `i` receives
/// the extra payoff `(β/√D) Σ_k sin(x_{ik} − c_{ik})` where `c` is the
/// barycenter of the action set and `D` the total dimension, so the
/// perturbation field `(β/√D) cos(x − c)` has dual norm at most `β`, with
/// equality at `x = c`.
#[derive(Clone, Debug, PartialEq)]
pub struct StageGame<F> {
    family: GameFamily<F>,
    sets: Vec<ActionSet<F>>,
    perturbation: F,
}

impl<F: Scalar> StageGame<F> {
    pub fn bilinear_zero_sum(matrix: Vec<Vec<F>>) -> Result<Self> {
        let rows = matrix.len();
        let cols = matrix.first().map_or(0, Vec::len);
        if rows < 2 || cols < 2 || matrix.iter().any(|r| r.len() != cols) {
            return Err(Error::InvalidInput(
                "payoff matrix must be rectangular with at least 2 rows and 2 columns".into(),
            ));
        }
        if matrix.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("payoff matrix must be finite".into()));
        }
        let sets = vec![ActionSet::simplex(rows)?, ActionSet::simplex(cols)?];
        Ok(Self {
            family: GameFamily::BilinearZeroSum { matrix },
            sets,
            perturbation: F::zero(),
        })
    }

    pub fn kelly_auction(
        gains: Vec<F>,
        capacity: F,
        entry_barrier: F,
        budgets: Vec<F>,
    ) -> Result<Self> {
        if gains.is_empty() || gains.len() != budgets.len() {
            return Err(Error::InvalidInput(
                "kelly auction needs one gain and one budget per bidder".into(),
            ));
        }
        if !(entry_barrier > F::zero()) {
            // The gradient blows up at the all-zero bid when c = 0.
            return Err(Error::InvalidInput(
                "kelly auction requires entry barrier c > 0".into(),
            ));
        }
        if !(capacity > F::zero()) || gains.iter().any(|&g| !(g > F::zero())) {
            return Err(Error::InvalidInput(
                "kelly auction requires positive capacity and gains".into(),
            ));
        }
        let sets = budgets
            .iter()
            .map(|&b| ActionSet::cube(vec![F::zero()], vec![b]))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            family: GameFamily::KellyAuction {
                gains,
                capacity,
                entry_barrier,
                budgets,
            },
            sets,
            perturbation: F::zero(),
        })
    }

    pub fn quadratic_network(
        mu: F,
        coupling: F,
        targets: Vec<Vec<F>>,
        lo: F,
        hi: F,
    ) -> Result<Self> {
        let n = targets.len();
        let dim = targets.first().map_or(0, Vec::len);
        if n == 0 || dim == 0 || targets.iter().any(|t| t.len() != dim) {
            return Err(Error::InvalidInput(
                "quadratic network needs equal-length, non-empty targets per player".into(),
            ));
        }
        if !(mu > F::zero()) {
            return Err(Error::InvalidInput(
                "quadratic network requires mu > 0".into(),
            ));
        }
        if !(coupling.abs() * F::from_usize_lossy(n - 1) < mu) {
            return Err(Error::InvalidInput(format!(
                "quadratic network requires |beta|(N-1) < mu (beta = {coupling}, N = {n}, mu = {mu})"
            )));
        }
        let sets = (0..n)
            .map(|_| ActionSet::uniform_box(dim, lo, hi))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            family: GameFamily::QuadraticNetwork {
                mu,
                coupling,
                targets,
                lo,
                hi,
            },
            sets,
            perturbation: F::zero(),
        })
    }

    pub fn linear(payoffs: Vec<F>) -> Result<Self> {
        let set = ActionSet::simplex(payoffs.len())?;
        Ok(Self {
            family: GameFamily::Linear { payoffs },
            sets: vec![set],
            perturbation: F::zero(),
        })
    }

    /// The same game with a perturbation field of dual norm `beta`.
    pub fn with_perturbation(mut self, beta: F) -> Self {
        self.perturbation = beta;
        self
    }

    /// The same game with new quadratic targets. Errors for other families.
    pub fn with_targets(mut self, new_targets: Vec<Vec<F>>) -> Result<Self> {
        match &mut self.family {
            GameFamily::QuadraticNetwork { targets, .. } if targets.len() == new_targets.len() => {
                *targets = new_targets;
                Ok(self)
            }
            _ => Err(Error::Unsupported(
                "targets can only be replaced on a quadratic network".into(),
            )),
        }
    }

    pub fn with_linear_payoffs(mut self, new_payoffs: Vec<F>) -> Result<Self> {
        match &mut self.family {
            GameFamily::Linear { payoffs } if payoffs.len() == new_payoffs.len() => {
                *payoffs = new_payoffs;
                Ok(self)
            }
            _ => Err(Error::Unsupported(
                "payoffs can only be replaced on a linear game of the same dimension".into(),
            )),
        }
    }

    pub fn family(&self) -> &GameFamily<F> {
        &self.family
    }

    pub fn players(&self) -> usize {
        self.sets.len()
    }

    pub fn sets(&self) -> &[ActionSet<F>] {
        &self.sets
    }

    pub fn set(&self, i: usize) -> &ActionSet<F> {
        &self.sets[i]
    }

    pub fn dims(&self) -> Vec<usize> {
        self.sets.iter().map(ActionSet::dim).collect()
    }

    pub fn total_dim(&self) -> usize {
        self.sets.iter().map(ActionSet::dim).sum()
    }

    pub fn perturbation(&self) -> F {
        self.perturbation
    }

    fn perturbation_weight(&self) -> F {
        self.perturbation / F::from_usize_lossy(self.total_dim()).sqrt()
    }

    /// `u_i(x)`.
    pub fn payoff(&self, i: usize, x: &ActionProfile<F>) -> F {
        let xi = x.block(i);
        let base = match &self.family {
            GameFamily::BilinearZeroSum { matrix } => {
                let f = bilinear_value(matrix, x.block(0), x.block(1));
                if i == 0 {
                    -f
                } else {
                    f
                }
            }
            GameFamily::KellyAuction {
                gains,
                capacity,
                entry_barrier,
                ..
            } => {
                let total: F = x.iter_flat().copied().sum();
                gains[i] * *capacity * xi[0] / (*entry_barrier + total) - xi[0]
            }
            GameFamily::QuadraticNetwork {
                mu,
                coupling,
                targets,
                ..
            } => {
                let others = others_sum(x, i);
                let dev = vec_ops::norm_sq(&vec_ops::sub(xi, &targets[i]));
                -(*mu / F::lit(2.0)) * dev - *coupling * vec_ops::dot(xi, &others)
            }
            GameFamily::Linear { payoffs } => vec_ops::dot(payoffs, xi),
        };
        if self.perturbation == F::zero() {
            return base;
        }
        let w = self.perturbation_weight();
        let center = self.sets[i].barycenter();
        base + w * xi
            .iter()
            .zip(&center)
            .map(|(&v, &c)| (v - c).sin())
            .sum::<F>()
    }

    /// Individual payoff gradient `V_i(x) = ∇_{x_i} u_i(x)`.
    pub fn player_gradient(&self, i: usize, x: &ActionProfile<F>) -> Vec<F> {
        let xi = x.block(i);
        let mut g = match &self.family {
            GameFamily::BilinearZeroSum { matrix } => {
                if i == 0 {
                    matrix
                        .iter()
                        .map(|row| -vec_ops::dot(row, x.block(1)))
                        .collect()
                } else {
                    let x1 = x.block(0);
                    (0..matrix[0].len())
                        .map(|j| matrix.iter().zip(x1).map(|(row, &w)| row[j] * w).sum())
                        .collect()
                }
            }
            GameFamily::KellyAuction {
                gains,
                capacity,
                entry_barrier,
                ..
            } => {
                let total: F = x.iter_flat().copied().sum();
                let denom = *entry_barrier + total;
                vec![gains[i] * *capacity * (denom - xi[0]) / (denom * denom) - F::one()]
            }
            GameFamily::QuadraticNetwork {
                mu,
                coupling,
                targets,
                ..
            } => {
                let others = others_sum(x, i);
                xi.iter()
                    .zip(&targets[i])
                    .zip(&others)
                    .map(|((&v, &t), &s)| -*mu * (v - t) - *coupling * s)
                    .collect()
            }
            GameFamily::Linear { payoffs } => payoffs.clone(),
        };
        if self.perturbation != F::zero() {
            let w = self.perturbation_weight();
            let center = self.sets[i].barycenter();
            for ((gk, &v), &c) in g.iter_mut().zip(xi).zip(&center) {
                *gk += w * (v - c).cos();
            }
        }
        g
    }

    /// Joint gradient field `V(x) = (V_1(x), …, V_N(x))`.
    pub fn gradient(&self, x: &ActionProfile<F>) -> DualVector<F> {
        DualVector::new(
            (0..self.players())
                .map(|i| self.player_gradient(i, x))
                .collect(),
        )
    }

    pub fn monotonicity(&self) -> Monotonicity<F> {
        match &self.family {
            GameFamily::QuadraticNetwork { .. } => {
                let m = self.strong_modulus_unperturbed() - self.perturbation_curvature();
                if m > F::zero() {
                    Monotonicity::Strong(m)
                } else {
                    Monotonicity::Monotone
                }
            }
            GameFamily::KellyAuction { .. } if self.perturbation == F::zero() => {
                Monotonicity::Strict
            }
            _ => Monotonicity::Monotone,
        }
    }

    fn strong_modulus_unperturbed(&self) -> F {
        match &self.family {
            GameFamily::QuadraticNetwork { mu, coupling, .. } => {
                let n = F::from_usize_lossy(self.players());
                (*mu - *coupling).min(*mu + (n - F::one()) * *coupling)
            }
            _ => F::zero(),
        }
    }

    /// Bound on the spectral radius of the perturbation Jacobian.
    fn perturbation_curvature(&self) -> F {
        self.perturbation_weight().abs()
    }

    /// Upper bound `B` on `‖V(x)‖` over the action space.
    pub fn gradient_bound(&self) -> F {
        let base = match &self.family {
            GameFamily::BilinearZeroSum { matrix } => {
                let col_max = (0..matrix[0].len())
                    .map(|j| matrix.iter().map(|r| r[j] * r[j]).sum::<F>())
                    .fold(F::zero(), F::max);
                let row_max = matrix
                    .iter()
                    .map(|r| vec_ops::norm_sq(r))
                    .fold(F::zero(), F::max);
                (col_max + row_max).sqrt()
            }
            GameFamily::KellyAuction {
                gains,
                capacity,
                entry_barrier,
                ..
            } => gains
                .iter()
                .map(|&g| {
                    let b = g * *capacity / *entry_barrier + F::one();
                    b * b
                })
                .sum::<F>()
                .sqrt(),
            GameFamily::QuadraticNetwork {
                mu,
                coupling,
                targets,
                lo,
                hi,
            } => {
                let n = F::from_usize_lossy(self.players());
                let mag = lo.abs().max(hi.abs());
                targets
                    .iter()
                    .flatten()
                    .map(|&t| {
                        let dev = (*hi - t).abs().max((t - *lo).abs());
                        let b = *mu * dev + coupling.abs() * (n - F::one()) * mag;
                        b * b
                    })
                    .sum::<F>()
                    .sqrt()
            }
            GameFamily::Linear { payoffs } => vec_ops::norm(payoffs),
        };
        base + self.perturbation.abs()
    }

    /// Lipschitz constant `Λ` of `V`.
    pub fn lipschitz(&self) -> F {
        let base = match &self.family {
            GameFamily::BilinearZeroSum { matrix } => {
                matrix.iter().map(|r| vec_ops::norm_sq(r)).sum::<F>().sqrt()
            }
            GameFamily::KellyAuction {
                gains,
                capacity,
                entry_barrier,
                ..
            } => {
                let g = gains.iter().copied().fold(F::zero(), F::max);
                let n = F::from_usize_lossy(gains.len());
                F::lit(3.0) * n * g * *capacity / (*entry_barrier * *entry_barrier)
            }
            GameFamily::QuadraticNetwork { mu, coupling, .. } => {
                let n = F::from_usize_lossy(self.players());
                (*mu - *coupling)
                    .abs()
                    .max((*mu + (n - F::one()) * *coupling).abs())
            }
            GameFamily::Linear { .. } => F::zero(),
        };
        base + self.perturbation_curvature()
    }

    /// True when `u_i` is linear in the player's own action, so that
    /// `V_i` does not depend on `x_i`.
    pub fn linear_in_own_action(&self) -> bool {
        self.perturbation == F::zero()
            && matches!(
                self.family,
                GameFamily::BilinearZeroSum { .. } | GameFamily::Linear { .. }
            )
    }

    /// Closed-form best response of player `i` to `x_{-i}`, when one exists.
    pub fn best_response(&self, i: usize, x: &ActionProfile<F>) -> Option<Vec<F>> {
        if self.perturbation != F::zero() {
            return None;
        }
        match &self.family {
            GameFamily::BilinearZeroSum { .. } | GameFamily::Linear { .. } => {
                Some(self.sets[i].support_max(&self.player_gradient(i, x)).0)
            }
            GameFamily::KellyAuction {
                gains,
                capacity,
                entry_barrier,
                budgets,
            } => {
                // Stationarity g q (c + s)/(c + s + x)² = 1 for the rest-of-field bid s.
                let others: F = x.iter_flat().copied().sum::<F>() - x.block(i)[0];
                let base = *entry_barrier + others;
                let bid = (gains[i] * *capacity * base).sqrt() - base;
                Some(vec![bid.max(F::zero()).min(budgets[i])])
            }
            GameFamily::QuadraticNetwork {
                mu,
                coupling,
                targets,
                ..
            } => {
                let others = others_sum(x, i);
                let peak: Vec<F> = targets[i]
                    .iter()
                    .zip(&others)
                    .map(|(&t, &s)| t - *coupling * s / *mu)
                    .collect();
                Some(self.sets[i].project(&peak))
            }
        }
    }

    /// Checks that `x` is a well-formed point of the action space.
    pub fn check_profile(&self, x: &ActionProfile<F>) -> Result<()> {
        if x.dims() != self.dims() {
            return Err(Error::InvalidInput(format!(
                "profile shape {:?} does not match the game {:?}",
                x.dims(),
                self.dims()
            )));
        }
        Ok(())
    }

    pub fn is_box_game(&self) -> bool {
        self.sets
            .iter()
            .all(|s| matches!(s.kind(), SetKind::Box { .. }))
    }
}

fn bilinear_value<F: Scalar>(matrix: &[Vec<F>], x1: &[F], x2: &[F]) -> F {
    matrix
        .iter()
        .zip(x1)
        .map(|(row, &w)| w * vec_ops::dot(row, x2))
        .sum()
}

/// `Σ_{j≠i} x_j` for equal-dimension players.
fn others_sum<F: Scalar>(x: &ActionProfile<F>, i: usize) -> Vec<F> {
    let d = x.block(i).len();
    let mut s = vec![F::zero(); d];
    for (j, b) in x.blocks().iter().enumerate() {
        if j != i {
            for (acc, &v) in s.iter_mut().zip(b) {
                *acc += v;
            }
        }
    }
    s
}
