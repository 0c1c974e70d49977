//! End-to-end scenario checks: worked examples, direction of the predicted
//! order, the crossing counterexample and the pairwise exchange inequality.

use rand::Rng;
use schurorder_core::harness::{
    check_hypotheses, generate_suite, pairwise_exchange_check, run_counterexample, run_scenario, verify,
    verify_iid_theorem, verify_noniid_theorem, Preset, Scenario, ScenarioOutcome, Status, SuiteConfig,
};
use schurorder_core::rng::from_seed;
use schurorder_core::transforms::power_pair;
use schurorder_core::{DistSpec, Error, MajorizationMode, Relation, Transform, Variant, WeightVector};
use statrs::distribution::{ContinuousCDF, Gamma};

fn wv(v: &[f64]) -> WeightVector {
    WeightVector::new(v.to_vec()).unwrap()
}

fn scenario(dists: Vec<DistSpec>, phi: Transform, psi: Transform, variant: Variant, a: &[f64], b: &[f64]) -> Scenario {
    Scenario {
        name: "case".into(),
        dists,
        phi,
        psi,
        variant,
        a: wv(a),
        b: wv(b),
        premise_mode: MajorizationMode::Full,
        n_samples: 20_000,
        seed: 9,
        delta: 0.01,
    }
}

fn exp_iid(a: &[f64], b: &[f64]) -> Scenario {
    let d = DistSpec::exponential(1.0).unwrap();
    scenario(vec![d; a.len()], Transform::exp(), Transform::exp(), Variant::Convex, a, b)
}

#[test]
fn exponential_example_a_dominates() {
    let r = verify_iid_theorem(&exp_iid(&[4.0, 1.0], &[2.0, 2.0])).unwrap();
    assert!(r.consistent);
    assert_eq!(r.predicted, Relation::ADominates);
    assert_eq!(r.oracle_verdict.unwrap().relation, Relation::ADominates);
    assert!(r.verdict.relation != Relation::BDominates && r.verdict.relation != Relation::Crossing);
    // 4 X1 + X2 is hypoexponential, 2 (X1 + X2) is gamma(2) scaled by 2.
    let t = 6.0;
    let fa = 1.0 - (4.0 * (-t / 4.0f64).exp() - (-t).exp()) / 3.0;
    let fb = Gamma::new(2.0, 0.5).unwrap().cdf(t);
    assert!(fa < fb);
    assert_eq!(r.mean_a, Some(5.0));
    assert_eq!(r.mean_b, Some(4.0));
}

/// `p = q = 2`, concave case: weights `b` with `b² ⪯ a²` give the larger sum.
#[test]
fn power_two_concave_example_b_dominates() {
    let (phi, psi) = power_pair(2.0, 2.0).unwrap();
    let d = DistSpec::gen_gamma(2.0, 1.5, 1.0).unwrap();
    let b = 2.5f64.sqrt();
    let s = scenario(vec![d; 2], phi, psi, Variant::Concave, &[2.0, 1.0], &[b, b]);
    let h = check_hypotheses(&s).unwrap();
    assert_eq!(h.overall(), Status::Pass, "{h:?}");
    let r = verify(&s).unwrap();
    assert_eq!(r.predicted, Relation::BDominates);
    assert!(r.consistent, "{r:?}");
    assert_eq!(r.oracle_verdict.unwrap().relation, Relation::BDominates);
}

/// Rates 1, 2, 3 form a decreasing lr chain; decreasing weights go first.
#[test]
fn exponential_chain_example() {
    let dists = [1.0, 2.0, 3.0].map(|l| DistSpec::gen_gamma(1.0, 1.0, l).unwrap()).to_vec();
    let s = scenario(dists, Transform::exp(), Transform::exp(), Variant::Convex, &[1.0, 4.0, 2.0], &[2.0, 2.0, 2.0]);
    let r = verify_noniid_theorem(&s).unwrap();
    assert_eq!(r.arranged_a, vec![4.0, 2.0, 1.0]);
    assert!(r.consistent, "{r:?}");
    assert_eq!(r.oracle_verdict.unwrap().relation, Relation::ADominates);
    // The iid entry point refuses a chain.
    assert!(matches!(verify_iid_theorem(&s), Err(Error::Parameter(_))));
    // A chain in the wrong order is a precondition failure.
    let mut rev = s.clone();
    rev.dists.reverse();
    assert!(matches!(verify_noniid_theorem(&rev), Err(Error::Precondition(_))));
}

#[test]
fn identical_laws_through_either_entry_point_agree() {
    let s = exp_iid(&[4.0, 1.0, 1.0], &[2.0, 2.0, 1.0]);
    let a = verify_iid_theorem(&s).unwrap();
    let b = verify_noniid_theorem(&s).unwrap();
    assert_eq!(a, b);
    assert!(a.consistent);
}

/// Every verified scenario's oracle sits on the predicted side: `A` for
/// convex presets and `B` for concave ones.
#[test]
fn predicted_direction_follows_variant() {
    let cfg = SuiteConfig { per_preset: 2, n_samples: 5_000, max_n: 3, ..Default::default() };
    let scenarios = generate_suite(&cfg).unwrap();
    let mut seen = [false; 2];
    for s in &scenarios {
        let preset = Preset::ALL.iter().find(|p| s.name.starts_with(p.name())).unwrap();
        assert_eq!(s.variant, preset.variant());
        match run_scenario(s) {
            ScenarioOutcome::Verified(r) => {
                assert!(r.consistent, "{}: {r:?}", s.name);
                let o = r.oracle_verdict.unwrap();
                let expect = if s.variant == Variant::Convex { Relation::ADominates } else { Relation::BDominates };
                assert_eq!(r.predicted, expect);
                assert!(o.relation == expect || o.relation == Relation::Inconclusive, "{}: {o:?}", s.name);
                seen[(s.variant == Variant::Concave) as usize] = true;
            }
            other => panic!("{}: {other:?}", s.name),
        }
    }
    assert_eq!(seen, [true, true]);
}

/// Random two-coordinate T-transforms of random gamma weightings: one
/// crossing and equal means every time.
#[test]
fn counterexample_is_robust() {
    let mut rng = from_seed(77);
    for k in 0..20 {
        let alpha: f64 = rng.random_range(1.0..4.0);
        let n = rng.random_range(3..6);
        let b: Vec<f64> = (0..n).map(|_| rng.random_range(0.5..3.0)).collect();
        let i = rng.random_range(0..n);
        let j = (i + rng.random_range(1..n)) % n;
        let (hi, lo) = if b[i] >= b[j] { (i, j) } else { (j, i) };
        let t = rng.random_range(0.4..1.0) * b[lo];
        let mut a = b.clone();
        a[hi] += t;
        a[lo] -= t;
        let r = run_counterexample(alpha, &wv(&a), &wv(&b), 0, k).unwrap();
        assert!(r.demonstrated, "alpha {alpha}, a {a:?}, b {b:?}: {r:?}");
        assert_eq!(r.crossings, 1);
        assert!((r.mean_a - r.mean_b).abs() < 1e-8);
    }
}

#[test]
fn counterexample_rejects_bad_instances() {
    let (a, b) = (wv(&[2.0, 1.0, 1.0]), wv(&[1.5, 1.5, 1.0]));
    assert!(run_counterexample(0.5, &a, &b, 0, 1).is_err());
    assert!(run_counterexample(1.0, &b, &a, 0, 1).is_err());
    assert!(run_counterexample(1.0, &wv(&[3.0, 1.0, 0.0]), &wv(&[4.0 / 3.0; 3]), 0, 1).is_err());
    assert!(run_counterexample(1.0, &a, &b, 10, 1).is_err());
}

/// `d1 ≥_lr d2` with the larger weight on `d1` beats the swap, checked on
/// a fixed grid and on the oracle grid.
#[test]
fn exchange_inequality_holds_for_random_pairs() {
    let mut rng = from_seed(88);
    let ts: Vec<f64> = (1..200).map(|i| i as f64 * 0.1).collect();
    for _ in 0..10 {
        let p: f64 = rng.random_range(0.7..2.5);
        let alpha: f64 = rng.random_range(1.0..3.0);
        let l: f64 = rng.random_range(0.5..2.0);
        let d1 = DistSpec::gen_gamma(p, alpha + rng.random_range(0.2..2.0), l).unwrap();
        let d2 = DistSpec::gen_gamma(p, alpha, l * rng.random_range(1.0..2.0)).unwrap();
        let c = wv(&[rng.random_range(0.1..2.0), rng.random_range(0.1..2.0)]);
        for phi in [Transform::exp(), Transform::power(2.0).unwrap(), Transform::power(-1.0).unwrap()] {
            let grid = pairwise_exchange_check(&d1, &d2, &c, &phi, Some(&ts)).unwrap();
            let oracle = pairwise_exchange_check(&d1, &d2, &c, &phi, None).unwrap();
            assert!(grid.holds && oracle.holds, "{d1:?} {d2:?} {c:?} {phi:?}: {oracle:?}");
            assert!(grid.weights[0] >= grid.weights[1]);
        }
        assert!(matches!(pairwise_exchange_check(&d2, &d1, &c, &Transform::exp(), None), Err(Error::Precondition(_))));
    }
}
