mod common;

use proptest::prelude::*;
use proxlearn::geometry::{ActionSet, Regularizer, RegularizerKind};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const TOL: f64 = 1e-10;

fn regularizer(entropic: bool) -> Regularizer {
    if entropic {
        Regularizer::entropic()
    } else {
        Regularizer::euclidean()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn energy_inequalities(seed: u64, entropic: bool) {
        let reg = regularizer(entropic);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = common::instance(reg.kind(), &mut rng);
        let v = common::violations(&reg, &inst);
        prop_assert!(v.iter().all(|&e| e <= TOL), "{v:?}");
    }

    #[test]
    fn template_inequality(seed: u64, entropic: bool) {
        let reg = regularizer(entropic);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let set = common::random_set(reg.kind(), &mut rng);
        prop_assert!(common::template_violation(&reg, &set, 25, &mut rng) <= TOL);
    }

    #[test]
    fn prox_stays_in_domain(seed: u64, entropic: bool) {
        let reg = regularizer(entropic);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = common::instance(reg.kind(), &mut rng);
        let next = reg.prox(&inst.set, &inst.x, &inst.y).unwrap();
        prop_assert!(inst.set.contains(&next));
        prop_assert!(reg.in_prox_domain(&inst.set, &next));
    }

    #[test]
    fn divergence_from_start_is_bounded_by_depth(seed: u64, entropic: bool) {
        let reg = regularizer(entropic);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let set = common::random_set(reg.kind(), &mut rng);
        let start = reg.dgf_min(&set).unwrap();
        let p = set.sample(&mut rng);
        let d = common::breg(&reg, &set, &p, &start);
        prop_assert!(d >= 0.0 && d <= reg.depth(&set) + TOL, "{d} vs {}", reg.depth(&set));
    }

    #[test]
    fn projection_is_the_closest_point(seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let set = common::random_set(RegularizerKind::Euclidean, &mut rng);
        let z: Vec<f64> = common::dual(set.dim(), &mut rng).iter().map(|v| 3.0 * v).collect();
        let proj = set.project(&z);
        prop_assert!(set.contains(&proj));
        // Variational characterisation: ⟨z − Π(z), w − Π(z)⟩ ≤ 0 for w in the set.
        for _ in 0..8 {
            let w = set.sample(&mut rng);
            let v = common::dot(&common::sub(&z, &proj), &common::sub(&w, &proj));
            prop_assert!(v <= 1e-9, "{v}");
        }
    }

    #[test]
    fn support_max_dominates_samples(seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let set = common::random_set(RegularizerKind::Euclidean, &mut rng);
        let c = common::dual(set.dim(), &mut rng);
        let (arg, best) = set.support_max(&c);
        prop_assert!(set.contains(&arg));
        prop_assert!((common::dot(&c, &arg) - best).abs() <= 1e-9);
        for _ in 0..16 {
            prop_assert!(common::dot(&c, &set.sample(&mut rng)) <= best + 1e-9);
        }
    }
}

#[test]
fn entropic_prox_is_exponential_weighting() {
    let reg = Regularizer::entropic();
    let set = ActionSet::<f64>::simplex(3).unwrap();
    let x = [0.2, 0.3, 0.5];
    let y = [0.4, -1.0, 0.1];
    let w: Vec<f64> = x.iter().zip(&y).map(|(a, b)| a * f64::exp(*b)).collect();
    let s: f64 = w.iter().sum();
    let next = reg.prox(&set, &x, &y).unwrap();
    for (a, b) in next.iter().zip(&w) {
        assert!((a - b / s).abs() < 1e-15);
    }
}

#[test]
fn entropic_prox_survives_huge_steps() {
    let reg = Regularizer::entropic();
    let set = ActionSet::<f64>::simplex(4).unwrap();
    let next = reg.prox(&set, &[0.25; 4], &[1e6, 0.0, -1e6, 3.0]).unwrap();
    assert!(set.contains(&next));
    assert!(next.iter().all(|&v| v > 0.0));
    assert!(next[0] > 1.0 - 1e-12);
}

#[test]
fn f32_geometry_agrees_with_f64() {
    let s32 = ActionSet::<f32>::simplex(3).unwrap();
    let s64 = ActionSet::<f64>::simplex(3).unwrap();
    let a = s32.project(&[0.9, 0.4, -0.2]);
    let b = s64.project(&[0.9, 0.4, -0.2]);
    for (x, y) in a.iter().zip(&b) {
        assert!((f64::from(*x) - y).abs() < 1e-6);
    }
    let e32 = Regularizer::entropic()
        .prox(&s32, &[0.2, 0.3, 0.5], &[0.1, 0.2, 0.3])
        .unwrap();
    let e64 = Regularizer::entropic()
        .prox(&s64, &[0.2, 0.3, 0.5], &[0.1, 0.2, 0.3])
        .unwrap();
    for (x, y) in e32.iter().zip(&e64) {
        assert!((f64::from(*x) - y).abs() < 1e-6);
    }
}
