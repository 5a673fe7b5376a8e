use rand::Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};

use crate::profile::vec_ops;
use crate::{Error, Result, Scalar};

/// Shape of a player's action set.
#[derive(Clone, Debug, PartialEq)]
pub enum SetKind<F> {
    /// Probability simplex `{x ≥ 0 : Σ x_j = 1}` in `R^dim`.
    Simplex { dim: usize },
    /// Axis-aligned box `∏ [lo_j, hi_j]`.
    Box { lo: Vec<F>, hi: Vec<F> },
    /// Closed Euclidean ball.
    Ball { center: Vec<F>, radius: F },
}

/// Compact convex action set of a single player.
#[derive(Clone, Debug, PartialEq)]
pub struct ActionSet<F> {
    kind: SetKind<F>,
}

impl<F: Scalar> ActionSet<F> {
    /// Simplex of dimension `dim ≥ 2` (a one-point simplex has zero diameter).
    pub fn simplex(dim: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidInput(format!(
                "simplex dimension must be at least 2, got {dim}"
            )));
        }
        Ok(Self {
            kind: SetKind::Simplex { dim },
        })
    }

    pub fn cube(lo: Vec<F>, hi: Vec<F>) -> Result<Self> {
        if lo.is_empty() || lo.len() != hi.len() {
            return Err(Error::InvalidInput(format!(
                "box bounds must be non-empty and of equal length ({} vs {})",
                lo.len(),
                hi.len()
            )));
        }
        if let Some(j) =
            (0..lo.len()).find(|&j| !(lo[j] < hi[j]) || !lo[j].is_finite() || !hi[j].is_finite())
        {
            return Err(Error::InvalidInput(format!(
                "box requires finite lo < hi, violated at coordinate {j}"
            )));
        }
        Ok(Self {
            kind: SetKind::Box { lo, hi },
        })
    }

    /// Box `[lo, hi]^dim`.
    pub fn uniform_box(dim: usize, lo: F, hi: F) -> Result<Self> {
        Self::cube(vec![lo; dim], vec![hi; dim])
    }

    pub fn ball(center: Vec<F>, radius: F) -> Result<Self> {
        if center.is_empty() || !(radius > F::zero()) || !radius.is_finite() {
            return Err(Error::InvalidInput(
                "ball requires a non-empty center and a finite radius > 0".into(),
            ));
        }
        Ok(Self {
            kind: SetKind::Ball { center, radius },
        })
    }

    pub fn kind(&self) -> &SetKind<F> {
        &self.kind
    }

    pub fn is_simplex(&self) -> bool {
        matches!(self.kind, SetKind::Simplex { .. })
    }

    pub fn dim(&self) -> usize {
        match &self.kind {
            SetKind::Simplex { dim } => *dim,
            SetKind::Box { lo, .. } => lo.len(),
            SetKind::Ball { center, .. } => center.len(),
        }
    }

    pub fn contains(&self, x: &[F]) -> bool {
        self.contains_tol(x, F::tolerance())
    }

    pub fn contains_tol(&self, x: &[F], tol: F) -> bool {
        if x.len() != self.dim() || x.iter().any(|v| !v.is_finite()) {
            return false;
        }
        match &self.kind {
            SetKind::Simplex { .. } => {
                let sum: F = x.iter().copied().sum();
                x.iter().all(|&v| v >= -tol) && (sum - F::one()).abs() <= tol
            }
            SetKind::Box { lo, hi } => x
                .iter()
                .zip(lo.iter().zip(hi))
                .all(|(&v, (&l, &h))| v >= l - tol && v <= h + tol),
            SetKind::Ball { center, radius } => vec_ops::dist(x, center) <= *radius + tol,
        }
    }

    /// Euclidean diameter.
    pub fn diameter(&self) -> F {
        match &self.kind {
            SetKind::Simplex { .. } => F::lit(2.0).sqrt(),
            SetKind::Box { lo, hi } => vec_ops::dist(hi, lo),
            SetKind::Ball { radius, .. } => F::lit(2.0) * *radius,
        }
    }

    pub fn barycenter(&self) -> Vec<F> {
        match &self.kind {
            SetKind::Simplex { dim } => vec![F::one() / F::from_usize_lossy(*dim); *dim],
            SetKind::Box { lo, hi } => lo
                .iter()
                .zip(hi)
                .map(|(&l, &h)| (l + h) / F::lit(2.0))
                .collect(),
            SetKind::Ball { center, .. } => center.clone(),
        }
    }

    /// Radius of the largest ball centred at [`barycenter`](Self::barycenter)
    /// inside the set. For the simplex the ball lives in the affine hull.
    pub fn inradius(&self) -> F {
        match &self.kind {
            SetKind::Simplex { dim } => {
                let d = F::from_usize_lossy(*dim);
                F::one() / (d * (d - F::one())).sqrt()
            }
            SetKind::Box { lo, hi } => lo
                .iter()
                .zip(hi)
                .map(|(&l, &h)| (h - l) / F::lit(2.0))
                .fold(F::infinity(), F::min),
            SetKind::Ball { radius, .. } => *radius,
        }
    }

    /// Euclidean projection onto the set.
    pub fn project(&self, x: &[F]) -> Vec<F> {
        debug_assert_eq!(x.len(), self.dim());
        match &self.kind {
            SetKind::Simplex { .. } => project_simplex(x),
            SetKind::Box { lo, hi } => x
                .iter()
                .zip(lo.iter().zip(hi))
                .map(|(&v, (&l, &h))| v.max(l).min(h))
                .collect(),
            SetKind::Ball { center, radius } => {
                let offset = vec_ops::sub(x, center);
                let dist = vec_ops::norm(&offset);
                if dist <= *radius {
                    x.to_vec()
                } else {
                    let s = *radius / dist;
                    center
                        .iter()
                        .zip(&offset)
                        .map(|(&c, &o)| c + s * o)
                        .collect()
                }
            }
        }
    }

    /// Maximizer of `⟨c, x⟩` over the set and the maximal value. Ties go to
    /// the lowest index.
    pub fn support_max(&self, c: &[F]) -> (Vec<F>, F) {
        debug_assert_eq!(c.len(), self.dim());
        match &self.kind {
            SetKind::Simplex { dim } => {
                let mut best = 0;
                for j in 1..*dim {
                    if c[j] > c[best] {
                        best = j;
                    }
                }
                let mut x = vec![F::zero(); *dim];
                x[best] = F::one();
                (x, c[best])
            }
            SetKind::Box { lo, hi } => {
                let x: Vec<F> = c
                    .iter()
                    .zip(lo.iter().zip(hi))
                    .map(|(&cj, (&l, &h))| if cj > F::zero() { h } else { l })
                    .collect();
                let value = vec_ops::dot(c, &x);
                (x, value)
            }
            SetKind::Ball { center, radius } => {
                let norm = vec_ops::norm(c);
                if norm > F::zero() {
                    let x: Vec<F> = center
                        .iter()
                        .zip(c)
                        .map(|(&p, &cj)| p + *radius * cj / norm)
                        .collect();
                    (x, vec_ops::dot(c, center) + *radius * norm)
                } else {
                    (center.clone(), F::zero())
                }
            }
        }
    }

    /// Draws a point from the set. Simplex points are Dirichlet(1) and hence
    /// strictly positive almost surely; box and ball points are uniform.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<F> {
        match &self.kind {
            SetKind::Simplex { dim } => {
                let e: Vec<f64> = (0..*dim)
                    .map(|_| {
                        let v: f64 = Exp1.sample(rng);
                        v.max(1e-12)
                    })
                    .collect();
                let s: f64 = e.iter().sum();
                e.iter().map(|&v| F::lit(v / s)).collect()
            }
            SetKind::Box { lo, hi } => lo
                .iter()
                .zip(hi)
                .map(|(&l, &h)| l + (h - l) * F::lit(rng.random::<f64>()))
                .collect(),
            SetKind::Ball { center, radius } => {
                let d = center.len();
                let g: Vec<f64> = (0..d).map(|_| StandardNormal.sample(rng)).collect();
                let n = g.iter().map(|v| v * v).sum::<f64>().sqrt().max(1e-300);
                let r = radius.to_f64_lossy() * rng.random::<f64>().powf(1.0 / d as f64);
                center
                    .iter()
                    .zip(&g)
                    .map(|(&c, &gj)| c + F::lit(r * gj / n))
                    .collect()
            }
        }
    }

    /// Orthonormal directions spanning the tangent space used for one-point
    /// gradient estimation: the standard basis for boxes and balls, and a
    /// Helmert basis of the sum-zero hyperplane for the simplex.
    pub fn perturbation_basis(&self) -> Vec<Vec<F>> {
        let d = self.dim();
        match &self.kind {
            SetKind::Simplex { .. } => (1..d)
                .map(|k| {
                    let kf = F::from_usize_lossy(k);
                    let scale = F::one() / (kf * (kf + F::one())).sqrt();
                    let mut u = vec![F::zero(); d];
                    for v in u.iter_mut().take(k) {
                        *v = scale;
                    }
                    u[k] = -kf * scale;
                    u
                })
                .collect(),
            _ => (0..d)
                .map(|k| {
                    let mut e = vec![F::zero(); d];
                    e[k] = F::one();
                    e
                })
                .collect(),
        }
    }
}

/// Sort-based projection onto the probability simplex.
fn project_simplex<F: Scalar>(x: &[F]) -> Vec<F> {
    let mut sorted = x.to_vec();
    sorted.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
    let mut cumsum = F::zero();
    let mut theta = F::zero();
    for (k, &u) in sorted.iter().enumerate() {
        cumsum += u;
        let t = (cumsum - F::one()) / F::from_usize_lossy(k + 1);
        if u - t > F::zero() {
            theta = t;
        }
    }
    x.iter().map(|&v| (v - theta).max(F::zero())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn invalid_sets_are_rejected() {
        assert!(ActionSet::<f64>::simplex(1).is_err());
        assert!(ActionSet::cube(vec![0.0, 1.0], vec![1.0, 1.0]).is_err());
        assert!(ActionSet::cube(vec![0.0], vec![1.0, 2.0]).is_err());
        assert!(ActionSet::ball(vec![0.0], 0.0).is_err());
        assert!(ActionSet::ball(Vec::<f64>::new(), 1.0).is_err());
    }

    #[test]
    fn support_max_examples() {
        let s = ActionSet::<f64>::simplex(3).unwrap();
        assert_eq!(s.support_max(&[1.0, 5.0, 2.0]), (vec![0.0, 1.0, 0.0], 5.0));

        let b = ActionSet::uniform_box(2, 0.0, 1.0).unwrap();
        assert_eq!(b.support_max(&[-1.0, 2.0]), (vec![0.0, 1.0], 2.0));

        let ball = ActionSet::<f64>::ball(vec![0.0, 0.0], 2.0).unwrap();
        let (x, v) = ball.support_max(&[3.0, 4.0]);
        assert!((x[0] - 1.2).abs() < 1e-12 && (x[1] - 1.6).abs() < 1e-12);
        assert!((v - 10.0).abs() < 1e-12);
    }

    #[test]
    fn support_max_ties_and_zero_direction() {
        let s = ActionSet::<f64>::simplex(3).unwrap();
        assert_eq!(s.support_max(&[2.0, 2.0, 1.0]).0, vec![1.0, 0.0, 0.0]);
        let ball = ActionSet::ball(vec![1.0, -1.0], 1.0).unwrap();
        let (x, v) = ball.support_max(&[0.0, 0.0]);
        assert_eq!(x, vec![1.0, -1.0]);
        assert_eq!(v, 0.0);
    }

    #[test]
    fn simplex_projection_known_values() {
        let s = ActionSet::<f64>::simplex(3).unwrap();
        assert_eq!(s.project(&[0.2, 0.3, 0.5]), vec![0.2, 0.3, 0.5]);
        let p = s.project(&[2.0, 0.0, 0.0]);
        assert_eq!(p, vec![1.0, 0.0, 0.0]);
        let p = s.project(&[0.5, 0.5, 0.5]);
        for v in p {
            assert!((v - 1.0 / 3.0).abs() < 1e-15);
        }
    }

    #[test]
    fn projection_lands_in_set_and_is_closest() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let sets = [
            ActionSet::<f64>::simplex(4).unwrap(),
            ActionSet::cube(vec![-1.0, 0.0, 2.0], vec![1.0, 0.5, 3.0]).unwrap(),
            ActionSet::ball(vec![3.0, 4.0], 1.0).unwrap(),
        ];
        for set in &sets {
            for _ in 0..500 {
                let x: Vec<f64> = (0..set.dim())
                    .map(|_| rng.random_range(-5.0..5.0))
                    .collect();
                let p = set.project(&x);
                assert!(set.contains(&p), "{p:?} outside {set:?}");
                let d = vec_ops::dist(&x, &p);
                for _ in 0..20 {
                    let z = set.sample(&mut rng);
                    assert!(vec_ops::dist(&x, &z) >= d - 1e-12);
                }
            }
        }
    }

    #[test]
    fn simplex_basis_is_orthonormal_and_sum_free() {
        let s = ActionSet::<f64>::simplex(5).unwrap();
        let basis = s.perturbation_basis();
        assert_eq!(basis.len(), 4);
        for (a, u) in basis.iter().enumerate() {
            assert!(u.iter().sum::<f64>().abs() < 1e-15);
            for (b, w) in basis.iter().enumerate() {
                let expect = if a == b { 1.0 } else { 0.0 };
                assert!((vec_ops::dot(u, w) - expect).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn inscribed_ball_stays_inside() {
        let sets = [
            ActionSet::<f64>::simplex(4).unwrap(),
            ActionSet::cube(vec![0.0, 0.0], vec![2.0, 1.0]).unwrap(),
            ActionSet::ball(vec![3.0, 4.0], 1.0).unwrap(),
        ];
        for set in &sets {
            let p = set.barycenter();
            let r = set.inradius();
            for u in set.perturbation_basis() {
                for sign in [-1.0, 1.0] {
                    let q: Vec<f64> = p.iter().zip(&u).map(|(&a, &b)| a + sign * r * b).collect();
                    assert!(set.contains(&q), "{q:?} outside {set:?}");
                }
            }
        }
    }

    #[test]
    fn samples_are_members() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let ball = ActionSet::<f32>::ball(vec![0.0, 1.0, 2.0], 0.5).unwrap();
        for _ in 0..1000 {
            assert!(ball.contains(&ball.sample(&mut rng)));
        }
    }
}
