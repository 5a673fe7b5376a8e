#![allow(dead_code)]

use proxlearn::geometry::{ActionSet, Regularizer, RegularizerKind};
use rand::Rng;
use rand_distr::StandardNormal;

/// A random prox instance: set, base point `p`, prox-domain point `x` and
/// dual step `y`.
pub struct Instance {
    pub set: ActionSet<f64>,
    pub p: Vec<f64>,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

pub fn random_set<R: Rng>(kind: RegularizerKind, rng: &mut R) -> ActionSet<f64> {
    let dim = rng.random_range(2..=8);
    match (kind, rng.random_range(0..3)) {
        (RegularizerKind::Entropic, _) | (_, 0) => ActionSet::simplex(dim).unwrap(),
        (_, 1) => {
            let lo: Vec<f64> = (0..dim).map(|_| rng.random_range(-2.0..1.0)).collect();
            let hi = lo.iter().map(|l| l + rng.random_range(0.1..3.0)).collect();
            ActionSet::cube(lo, hi).unwrap()
        }
        _ => {
            let c = (0..dim).map(|_| rng.random_range(-2.0..2.0)).collect();
            ActionSet::ball(c, rng.random_range(0.1..3.0)).unwrap()
        }
    }
}

pub fn dual<R: Rng>(dim: usize, rng: &mut R) -> Vec<f64> {
    let scale = 10f64.powf(rng.random_range(-2.0..0.7));
    (0..dim)
        .map(|_| scale * rng.sample::<f64, _>(StandardNormal))
        .collect()
}

pub fn instance<R: Rng>(kind: RegularizerKind, rng: &mut R) -> Instance {
    let set = random_set(kind, rng);
    let p = set.sample(rng);
    let x = set.sample(rng);
    let y = dual(set.dim(), rng);
    Instance { set, p, x, y }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn breg(reg: &Regularizer, set: &ActionSet<f64>, p: &[f64], x: &[f64]) -> f64 {
    reg.bregman(set, p, x).unwrap().value()
}

/// Violations of the three-point identity, both energy inequalities and
/// the strong-convexity lower bound on one instance. Positive means violated.
pub fn violations(reg: &Regularizer, inst: &Instance) -> [f64; 4] {
    let Instance { set, p, x, y } = inst;
    let next = reg.prox(set, x, y).unwrap();
    let three_point = reg.three_point_residual(set, p, x, &next).unwrap();
    let d_px = breg(reg, set, p, x);
    let d_pn = breg(reg, set, p, &next);
    let d_nx = breg(reg, set, &next, x);
    let sharp = d_pn - (d_px - d_nx + dot(y, &sub(&next, p)));
    let k: f64 = reg.modulus();
    let strong = d_pn - (d_px + dot(y, &sub(x, p)) + dot(y, y) / (2.0 * k));
    let d = sub(p, x);
    let convexity = 0.5 * k * dot(&d, &d) - d_px;
    [three_point, sharp, strong, convexity]
}

/// Violation of the weighted template inequality along `steps` prox
/// updates with random duals and nonnegative weights.
pub fn template_violation<R: Rng>(
    reg: &Regularizer,
    set: &ActionSet<f64>,
    steps: usize,
    rng: &mut R,
) -> f64 {
    let p = set.sample(rng);
    let mut x = set.sample(rng);
    let k: f64 = reg.modulus();
    let (mut lhs, mut rhs, mut prev_w) = (0.0, 0.0, 0.0);
    for _ in 0..steps {
        let y = dual(set.dim(), rng);
        let w: f64 = rng.random_range(0.0..2.0);
        lhs += w * dot(&y, &sub(&p, &x));
        rhs += (w - prev_w) * breg(reg, set, &p, &x) + w * dot(&y, &y) / (2.0 * k);
        prev_w = w;
        x = reg.prox(set, &x, &y).unwrap();
    }
    lhs - rhs
}
