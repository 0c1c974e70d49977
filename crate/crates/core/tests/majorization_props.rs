//! Property tests for majorization, T-transform chains, weak completions
//! and monotone transform preservation.

use proptest::prelude::*;
use rand::Rng;
use schurorder_core::majorization::{
    check_majorize, check_transform_preservation, t_transform_chain, weak_completion, PreservationCase, DEFAULT_TOL,
};
use schurorder_core::rng::{from_seed, Rng as ChaRng};
use schurorder_core::{MajorizationMode, WeightVector};

const MODES: [MajorizationMode; 3] = [MajorizationMode::Full, MajorizationMode::WeakSub, MajorizationMode::WeakSup];

fn wv(v: Vec<f64>) -> WeightVector {
    WeightVector::new(v).unwrap()
}

/// Random T-transform: `λ y + (1 - λ) y` with coordinates `i, j` swapped.
fn t_transform(rng: &mut ChaRng, y: &mut [f64]) {
    let n = y.len();
    let i = rng.random_range(0..n);
    let j = rng.random_range(0..n);
    let l: f64 = rng.random();
    let (yi, yj) = (y[i], y[j]);
    y[i] = l * yi + (1.0 - l) * yj;
    y[j] = l * yj + (1.0 - l) * yi;
}

fn random_vec(rng: &mut ChaRng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(0.0..10.0)).collect()
}

/// `(x, y)` with `x ⪯ y` in `mode`: `x` is a few T-transforms of `y`, then
/// pushed down (sub) or up (sup).
fn premise_pair(rng: &mut ChaRng, mode: MajorizationMode) -> (Vec<f64>, Vec<f64>) {
    let n = rng.random_range(2..7);
    let y = random_vec(rng, n);
    let mut x = y.clone();
    for _ in 0..rng.random_range(1..5) {
        t_transform(rng, &mut x);
    }
    for v in &mut x {
        match mode {
            MajorizationMode::WeakSub => *v *= rng.random_range(0.5..1.0),
            MajorizationMode::WeakSup => *v += rng.random_range(0.0..2.0),
            MajorizationMode::Full => {}
        }
    }
    (x, y)
}

fn vec_strategy() -> impl Strategy<Value = Vec<f64>> {
    (1usize..8).prop_flat_map(|n| prop::collection::vec(0.0f64..100.0, n))
}

fn pair_strategy() -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    (1usize..8).prop_flat_map(|n| (prop::collection::vec(0.0f64..10.0, n), prop::collection::vec(0.0f64..10.0, n)))
}

proptest! {
    #[test]
    fn reflexive_in_every_mode(v in vec_strategy()) {
        let v = wv(v);
        for mode in MODES {
            prop_assert!(check_majorize(&v, &v, mode, 0.0).unwrap());
        }
    }

    #[test]
    fn permutation_invariant((x, y) in pair_strategy(), sx in any::<u64>(), sy in any::<u64>()) {
        let shuffle = |v: &[f64], seed: u64| {
            let mut v = v.to_vec();
            let mut rng = from_seed(seed);
            for i in (1..v.len()).rev() {
                v.swap(i, rng.random_range(0..=i));
            }
            v
        };
        let (px, py) = (wv(shuffle(&x, sx)), wv(shuffle(&y, sy)));
        let (x, y) = (wv(x), wv(y));
        for mode in MODES {
            prop_assert_eq!(
                check_majorize(&x, &y, mode, DEFAULT_TOL).unwrap(),
                check_majorize(&px, &py, mode, DEFAULT_TOL).unwrap()
            );
        }
    }

    #[test]
    fn full_is_both_weak_orders((x, y) in pair_strategy()) {
        let (x, y) = (wv(x), wv(y));
        let full = check_majorize(&x, &y, MajorizationMode::Full, DEFAULT_TOL).unwrap();
        let sub = check_majorize(&x, &y, MajorizationMode::WeakSub, DEFAULT_TOL).unwrap();
        let sup = check_majorize(&x, &y, MajorizationMode::WeakSup, DEFAULT_TOL).unwrap();
        prop_assert_eq!(full, sub && sup);
    }

    #[test]
    fn full_is_both_weak_orders_on_majorized_pairs(seed in any::<u64>()) {
        let mut rng = from_seed(seed);
        let (x, y) = premise_pair(&mut rng, MajorizationMode::Full);
        let (x, y) = (wv(x), wv(y));
        prop_assert!(check_majorize(&x, &y, MajorizationMode::Full, DEFAULT_TOL).unwrap());
        prop_assert!(check_majorize(&x, &y, MajorizationMode::WeakSub, DEFAULT_TOL).unwrap());
        prop_assert!(check_majorize(&x, &y, MajorizationMode::WeakSup, DEFAULT_TOL).unwrap());
    }

    #[test]
    fn chain_steps_are_sound(seed in any::<u64>()) {
        let mut rng = from_seed(seed);
        let (x, y) = premise_pair(&mut rng, MajorizationMode::Full);
        let (x, y) = (wv(x), wv(y));
        let chain = t_transform_chain(&x, &y).unwrap();
        let steps = chain.steps();
        prop_assert!(steps.len() <= x.len());
        prop_assert_eq!(&steps[0], &x.sorted_increasing());
        prop_assert_eq!(steps.last().unwrap(), &y.sorted_increasing());
        for w in steps.windows(2) {
            let changed = w[0].values().iter().zip(w[1].values()).filter(|(a, b)| (*a - *b).abs() > 1e-12).count();
            prop_assert!(changed <= 2);
            prop_assert!(check_majorize(&w[0], &w[1], MajorizationMode::Full, 1e-9).unwrap());
        }
    }

    #[test]
    fn weak_completion_sandwich(seed in any::<u64>(), sub in any::<bool>()) {
        let mode = if sub { MajorizationMode::WeakSub } else { MajorizationMode::WeakSup };
        let mut rng = from_seed(seed);
        let (v, u) = premise_pair(&mut rng, mode);
        let (v, u) = (wv(v), wv(u));
        let c = weak_completion(&u, &v, mode).unwrap();
        prop_assert!(check_majorize(&v, &c, MajorizationMode::Full, 1e-9).unwrap());
        let (cs, us) = (c.sorted_increasing(), u.sorted_increasing());
        for (ci, ui) in cs.values().iter().zip(us.values()) {
            if sub {
                prop_assert!(*ci <= ui + 1e-9);
            } else {
                prop_assert!(*ci >= ui - 1e-9);
            }
        }
    }
}

#[test]
fn preservation_holds_for_each_case_and_transform() {
    type G = fn(f64) -> f64;
    let library: [(PreservationCase, &[(&str, G)]); 4] = [
        (PreservationCase::IncreasingConvex, &[("exp", |t| t.exp()), ("t^2", |t| t * t)]),
        (PreservationCase::IncreasingConcave, &[("log(1+t)", |t| t.ln_1p()), ("sqrt", |t| t.sqrt())]),
        (PreservationCase::DecreasingConvex, &[("-t", |t| -t), ("exp(-t)", |t| (-t).exp())]),
        (PreservationCase::DecreasingConcave, &[("-t", |t| -t), ("-exp(t)", |t| -t.exp())]),
    ];
    let mut rng = from_seed(21);
    for (case, gs) in library {
        for _ in 0..1000 {
            let (x, y) = premise_pair(&mut rng, case.premise());
            let (x, y) = (wv(x), wv(y));
            for (name, g) in gs {
                assert!(check_transform_preservation(g, &x, &y, case).unwrap(), "{case:?} with {name} on {x} and {y}");
            }
        }
    }
}

#[test]
fn preservation_rejects_missing_premise() {
    let x = wv(vec![3.0, 0.0]);
    let y = wv(vec![1.0, 1.0]);
    assert!(check_transform_preservation(|t: f64| t.exp(), &x, &y, PreservationCase::IncreasingConvex).is_err());
}

/// A weak-sup premise on `b^q` against `a^q` with `q < 0` carries over to a
/// weak-sub premise on the logarithms through `g(x) = log(x) / q`, which is
/// decreasing and convex.
#[test]
fn power_premise_reduces_to_log_premise() {
    let mut rng = from_seed(34);
    for _ in 0..500 {
        let q = -rng.random_range(0.2..4.0);
        let (u, v) = premise_pair(&mut rng, MajorizationMode::WeakSup);
        // Keep entries positive so the weights a = v^(1/q), b = u^(1/q) exist.
        let u: Vec<f64> = u.iter().map(|t| t + 0.1).collect();
        let v: Vec<f64> = v.iter().map(|t| t + 0.1).collect();
        let (bq, aq) = (wv(u), wv(v));
        assert!(check_majorize(&bq, &aq, MajorizationMode::WeakSup, DEFAULT_TOL).unwrap());
        let g = move |x: f64| x.ln() / q;
        assert!(check_transform_preservation(g, &bq, &aq, PreservationCase::DecreasingConvex).unwrap());
        let log_b = bq.map(|t| t.powf(1.0 / q).ln()).unwrap();
        let log_a = aq.map(|t| t.powf(1.0 / q).ln()).unwrap();
        assert!(check_majorize(&log_b, &log_a, MajorizationMode::WeakSub, 1e-9).unwrap());
    }
}
