//! Per-player block vectors.
//!
//! Primal action profiles and dual (gradient) vectors share one
//! representation: a list of per-player coordinate blocks. Norms are the
//! Euclidean norm on the concatenation, `‖x‖² = Σ_i ‖x_i‖²`, which is
//! self-dual, so the same accessor serves as the dual norm.

use crate::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct Profile<F> {
    blocks: Vec<Vec<F>>,
}

/// Joint play point `x = (x_1, …, x_N)`.
pub type ActionProfile<F> = Profile<F>;

/// Element of the dual space, e.g. the payoff gradient `V(x)`.
pub type DualVector<F> = Profile<F>;

impl<F: Scalar> Profile<F> {
    pub fn new(blocks: Vec<Vec<F>>) -> Self {
        Self { blocks }
    }

    /// Profile with a single player.
    pub fn single(block: Vec<F>) -> Self {
        Self {
            blocks: vec![block],
        }
    }

    pub fn zeros(dims: &[usize]) -> Self {
        Self {
            blocks: dims.iter().map(|&d| vec![F::zero(); d]).collect(),
        }
    }

    pub fn zeros_like(&self) -> Self {
        Self::zeros(&self.dims())
    }

    pub fn players(&self) -> usize {
        self.blocks.len()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.blocks.iter().map(Vec::len).collect()
    }

    pub fn total_dim(&self) -> usize {
        self.blocks.iter().map(Vec::len).sum()
    }

    pub fn block(&self, i: usize) -> &[F] {
        &self.blocks[i]
    }

    pub fn block_mut(&mut self, i: usize) -> &mut Vec<F> {
        &mut self.blocks[i]
    }

    pub fn blocks(&self) -> &[Vec<F>] {
        &self.blocks
    }

    pub fn into_blocks(self) -> Vec<Vec<F>> {
        self.blocks
    }

    /// Iterates over all coordinates in player order.
    pub fn iter_flat(&self) -> impl Iterator<Item = &F> + '_ {
        self.blocks.iter().flatten()
    }

    pub fn same_shape(&self, other: &Self) -> bool {
        self.blocks.len() == other.blocks.len()
            && self
                .blocks
                .iter()
                .zip(&other.blocks)
                .all(|(a, b)| a.len() == b.len())
    }

    /// Duality pairing `⟨self, other⟩`.
    pub fn dot(&self, other: &Self) -> F {
        debug_assert!(self.same_shape(other));
        self.blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| vec_ops::dot(a, b))
            .sum()
    }

    pub fn norm_sq(&self) -> F {
        self.blocks.iter().map(|b| vec_ops::norm_sq(b)).sum()
    }

    pub fn norm(&self) -> F {
        self.norm_sq().sqrt()
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self {
            blocks: self
                .blocks
                .iter()
                .zip(&other.blocks)
                .map(|(a, b)| vec_ops::sub(a, b))
                .collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            blocks: self
                .blocks
                .iter()
                .zip(&other.blocks)
                .map(|(a, b)| a.iter().zip(b).map(|(&x, &y)| x + y).collect())
                .collect(),
        }
    }

    pub fn scaled(&self, s: F) -> Self {
        Self {
            blocks: self
                .blocks
                .iter()
                .map(|b| b.iter().map(|&x| x * s).collect())
                .collect(),
        }
    }

    /// `self += s * other`
    pub fn add_scaled(&mut self, s: F, other: &Self) {
        for (a, b) in self.blocks.iter_mut().zip(&other.blocks) {
            for (x, &y) in a.iter_mut().zip(b) {
                *x += s * y;
            }
        }
    }

    pub fn is_finite(&self) -> bool {
        self.iter_flat().all(|x| x.is_finite())
    }

    pub fn cast<G: Scalar>(&self) -> Profile<G> {
        Profile {
            blocks: self
                .blocks
                .iter()
                .map(|b| b.iter().map(|&x| G::lit(x.to_f64_lossy())).collect())
                .collect(),
        }
    }
}

/// Slice arithmetic shared by the geometry and game code.
pub mod vec_ops {
    use crate::Scalar;

    pub fn dot<F: Scalar>(a: &[F], b: &[F]) -> F {
        a.iter().zip(b).map(|(&x, &y)| x * y).sum()
    }

    pub fn norm_sq<F: Scalar>(a: &[F]) -> F {
        a.iter().map(|&x| x * x).sum()
    }

    pub fn norm<F: Scalar>(a: &[F]) -> F {
        norm_sq(a).sqrt()
    }

    pub fn sub<F: Scalar>(a: &[F], b: &[F]) -> Vec<F> {
        a.iter().zip(b).map(|(&x, &y)| x - y).collect()
    }

    pub fn dist<F: Scalar>(a: &[F], b: &[F]) -> F {
        a.iter()
            .zip(b)
            .map(|(&x, &y)| (x - y) * (x - y))
            .sum::<F>()
            .sqrt()
    }
}
