use std::ops::RangeInclusive;

use super::trace::{RunTrace, TraceRow};
use crate::games::{GameFamily, GameSequence, StageGame};
use crate::geometry::{ActionSet, SetKind};
use crate::profile::vec_ops;
use crate::{ActionProfile, Error, Result, Scalar};

/// How the inner concave maximization of a regret computation is solved.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum InnerSolver {
    /// Closed form when the family admits one, bisection for scalar
    /// actions, projected gradient ascent otherwise.
    #[default]
    Auto,
    /// Always projected gradient ascent.
    ProjectedAscent,
}

const ASCENT_ITERS: usize = 500;
const ASCENT_TOL: f64 = 1e-8;
const BISECTION_ITERS: usize = 200;

/// `max_{x_i} Σ_{n∈window} ⟨V_{i,n}(X_n), x_i − X_{i,n}⟩`, computed exactly
/// with the support function of `X_i`.
pub fn gap<F: Scalar>(
    trace: &RunTrace<F>,
    sets: &[ActionSet<F>],
    player: usize,
    window: RangeInclusive<usize>,
) -> Result<F> {
    let rows = trace.window(&window)?;
    let set = &sets[player];
    let mut summed = vec![F::zero(); set.dim()];
    let mut played = F::zero();
    for row in rows {
        let v = row.gradient.block(player);
        for (acc, &g) in summed.iter_mut().zip(v) {
            *acc += g;
        }
        played += vec_ops::dot(v, row.candidate.block(player));
    }
    Ok(set.support_max(&summed).1 - played)
}

/// Running gap `Gap_i(1..=n)` for every `n`.
pub fn gap_series<F: Scalar>(trace: &RunTrace<F>, sets: &[ActionSet<F>], player: usize) -> Vec<F> {
    let set = &sets[player];
    let mut summed = vec![F::zero(); set.dim()];
    let mut played = F::zero();
    trace
        .rows()
        .iter()
        .map(|row| {
            let v = row.gradient.block(player);
            for (acc, &g) in summed.iter_mut().zip(v) {
                *acc += g;
            }
            played += vec_ops::dot(v, row.candidate.block(player));
            set.support_max(&summed).1 - played
        })
        .collect()
}

/// `max_{x_i} Σ_n [u_{i,n}(x_i; X_{−i,n}) − u_{i,n}(X_n)]` over a window.
pub fn static_regret<F: Scalar>(
    trace: &RunTrace<F>,
    seq: &GameSequence<F>,
    player: usize,
    window: RangeInclusive<usize>,
) -> Result<F> {
    static_regret_with(trace, seq, player, window, InnerSolver::Auto)
}

pub fn static_regret_with<F: Scalar>(
    trace: &RunTrace<F>,
    seq: &GameSequence<F>,
    player: usize,
    window: RangeInclusive<usize>,
    solver: InnerSolver,
) -> Result<F> {
    let rows = trace.window(&window)?;
    let games = rows
        .iter()
        .map(|r| seq.stage(r.stage))
        .collect::<Result<Vec<_>>>()?;
    let objective = Unilateral {
        games: &games,
        rows,
        player,
        set: &seq.sets()[player],
    };
    let best = match solver {
        InnerSolver::Auto => match objective.closed_form() {
            Some(x) => x,
            None => objective.maximize_numerically()?,
        },
        InnerSolver::ProjectedAscent => objective.projected_ascent()?,
    };
    Ok(objective.value(&best) - objective.realized_value())
}

/// `Σ_n [max_{x_i} u_{i,n}(x_i; X_{−i,n}) − u_{i,n}(X_n)]` over a window.
pub fn dynamic_regret<F: Scalar>(
    trace: &RunTrace<F>,
    seq: &GameSequence<F>,
    player: usize,
    window: RangeInclusive<usize>,
) -> Result<F> {
    let rows = trace.window(&window)?;
    let mut total = F::zero();
    for row in rows {
        total += stage_regret(seq, row, player)?;
    }
    Ok(total)
}

/// Cumulative dynamic regret `DynReg_i(1..=n)` for every `n`.
pub fn dynamic_regret_series<F: Scalar>(
    trace: &RunTrace<F>,
    seq: &GameSequence<F>,
    player: usize,
) -> Result<Vec<F>> {
    let mut total = F::zero();
    trace
        .rows()
        .iter()
        .map(|row| {
            total += stage_regret(seq, row, player)?;
            Ok(total)
        })
        .collect()
}

fn stage_regret<F: Scalar>(seq: &GameSequence<F>, row: &TraceRow<F>, player: usize) -> Result<F> {
    let game = seq.stage(row.stage)?;
    let played = game.payoff(player, &row.candidate);
    let best = match game.best_response(player, &row.candidate) {
        Some(x) => x,
        None => {
            let games = [game.clone()];
            let rows = std::slice::from_ref(row);
            Unilateral {
                games: &games,
                rows,
                player,
                set: game.set(player),
            }
            .maximize_numerically()?
        }
    };
    let best_value = game.payoff(player, &replace_block(&row.candidate, player, best));
    Ok((best_value - played).max(F::zero()))
}

fn replace_block<F: Scalar>(
    x: &ActionProfile<F>,
    player: usize,
    block: Vec<F>,
) -> ActionProfile<F> {
    let mut out = x.clone();
    *out.block_mut(player) = block;
    out
}

/// `x_i ↦ Σ_n u_{i,n}(x_i; X_{−i,n})` over a window of a trace.
struct Unilateral<'a, F> {
    games: &'a [StageGame<F>],
    rows: &'a [TraceRow<F>],
    player: usize,
    set: &'a ActionSet<F>,
}

impl<F: Scalar> Unilateral<'_, F> {
    fn value(&self, xi: &[F]) -> F {
        self.games
            .iter()
            .zip(self.rows)
            .map(|(g, r)| {
                g.payoff(
                    self.player,
                    &replace_block(&r.candidate, self.player, xi.to_vec()),
                )
            })
            .sum()
    }

    fn realized_value(&self) -> F {
        self.games
            .iter()
            .zip(self.rows)
            .map(|(g, r)| g.payoff(self.player, &r.candidate))
            .sum()
    }

    fn gradient(&self, xi: &[F]) -> Vec<F> {
        let mut g = vec![F::zero(); xi.len()];
        for (game, r) in self.games.iter().zip(self.rows) {
            let x = replace_block(&r.candidate, self.player, xi.to_vec());
            for (acc, v) in g.iter_mut().zip(game.player_gradient(self.player, &x)) {
                *acc += v;
            }
        }
        g
    }

    fn lipschitz(&self) -> F {
        self.games.iter().map(StageGame::lipschitz).sum()
    }

    fn closed_form(&self) -> Option<Vec<F>> {
        if self.games.iter().all(StageGame::linear_in_own_action) {
            let mut c = vec![F::zero(); self.set.dim()];
            for r in self.rows {
                for (acc, &v) in c.iter_mut().zip(r.gradient.block(self.player)) {
                    *acc += v;
                }
            }
            return Some(self.set.support_max(&c).0);
        }
        // Σ_n −(μ/2)‖x − θ_n‖² − β⟨x, s_n⟩ = −(μW/2)‖x − (θ̄ − β s̄/μ)‖² + const,
        // so the box projection of the unconstrained peak is exact.
        let mut peak = vec![F::zero(); self.set.dim()];
        let mut params = None;
        for (g, r) in self.games.iter().zip(self.rows) {
            if g.perturbation() != F::zero() {
                return None;
            }
            let GameFamily::QuadraticNetwork {
                mu,
                coupling,
                targets,
                ..
            } = g.family()
            else {
                return None;
            };
            match params {
                None => params = Some((*mu, *coupling)),
                Some(p) if p != (*mu, *coupling) => return None,
                _ => {}
            }
            for (k, acc) in peak.iter_mut().enumerate() {
                let others: F = r
                    .candidate
                    .blocks()
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| *j != self.player)
                    .map(|(_, b)| b[k])
                    .sum();
                *acc += targets[self.player][k] - *coupling * others / *mu;
            }
        }
        let w = F::from_usize_lossy(self.rows.len());
        let peak: Vec<F> = peak.into_iter().map(|v| v / w).collect();
        Some(self.set.project(&peak))
    }

    fn maximize_numerically(&self) -> Result<Vec<F>> {
        match self.set.kind() {
            SetKind::Box { lo, hi } if lo.len() == 1 => Ok(vec![self.bisect(lo[0], hi[0])]),
            _ => self.projected_ascent(),
        }
    }

    /// Root of the (decreasing) derivative of a concave scalar objective.
    fn bisect(&self, lo: F, hi: F) -> F {
        let slope = |x: F| self.gradient(&[x])[0];
        if slope(lo) <= F::zero() {
            return lo;
        }
        if slope(hi) >= F::zero() {
            return hi;
        }
        let (mut a, mut b) = (lo, hi);
        for _ in 0..BISECTION_ITERS {
            let m = (a + b) / F::lit(2.0);
            if slope(m) > F::zero() {
                a = m;
            } else {
                b = m;
            }
            if b - a <= F::epsilon() * (F::one() + a.abs()) {
                break;
            }
        }
        (a + b) / F::lit(2.0)
    }

    fn projected_ascent(&self) -> Result<Vec<F>> {
        let lipschitz = self.lipschitz();
        if !(lipschitz > F::zero()) {
            return Err(Error::Unsupported(
                "projected ascent needs a positive Lipschitz constant".into(),
            ));
        }
        let step = F::one() / lipschitz;
        let tol = F::lit(ASCENT_TOL);
        let mut x = self.set.project(&self.mean_action());
        let mut moved = F::infinity();
        for _ in 0..ASCENT_ITERS {
            let g = self.gradient(&x);
            let next: Vec<F> = x.iter().zip(&g).map(|(&a, &b)| a + step * b).collect();
            let next = self.set.project(&next);
            moved = vec_ops::dist(&next, &x);
            x = next;
            if moved <= tol {
                return Ok(x);
            }
        }
        Err(Error::Convergence {
            iterations: ASCENT_ITERS,
            residual: moved.to_f64_lossy(),
        })
    }

    fn mean_action(&self) -> Vec<F> {
        let mut m = vec![F::zero(); self.set.dim()];
        for r in self.rows {
            for (acc, &v) in m.iter_mut().zip(r.candidate.block(self.player)) {
                *acc += v;
            }
        }
        let w = F::from_usize_lossy(self.rows.len().max(1));
        m.into_iter().map(|v| v / w).collect()
    }
}
