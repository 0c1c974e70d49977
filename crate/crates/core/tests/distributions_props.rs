//! Distribution tests against closed forms computed with `statrs`.

use rand::Rng;
use schurorder_core::distributions::{
    density, log_concavity_classify, lr_compare, sample, transformed_density, LcStatus, LrVerdict, Method, PowerMap,
};
use schurorder_core::orders::{dkw_epsilon, st_compare_empirical};
use schurorder_core::quad::integrate;
use schurorder_core::rng::{from_seed, Rng as ChaRng};
use schurorder_core::{Continuous, DensitySpec, GeneralizedGamma, InverseGeneralizedGamma, Relation, Transform};
use statrs::distribution::{ContinuousCDF, Gamma};
use statrs::function::gamma::ln_gamma;

/// `F(x) = P(G ≤ λ x^p)` with `G` standard gamma(α).
fn oracle_cdf(p: f64, alpha: f64, lambda: f64, x: f64) -> f64 {
    Gamma::new(alpha, lambda).unwrap().cdf(x.powf(p))
}

fn oracle_pdf(p: f64, alpha: f64, lambda: f64, x: f64) -> f64 {
    (p.ln() + alpha * lambda.ln() - ln_gamma(alpha) + (alpha * p - 1.0) * x.ln() - lambda * x.powf(p)).exp()
}

fn random_params(rng: &mut ChaRng) -> (f64, f64, f64) {
    (rng.random_range(0.5..3.0), rng.random_range(0.5..4.0), rng.random_range(0.3..3.0))
}

#[test]
fn density_matches_formula() {
    let e = GeneralizedGamma::new(1.0, 1.0, 1.0).unwrap();
    assert!((density(&e, 0.5).unwrap() - 0.6065306597126334).abs() < 1e-15);
    let w = GeneralizedGamma::new(2.0, 1.0, 1.0).unwrap();
    assert!((density(&w, 1.0).unwrap() - 0.7357588823428847).abs() < 1e-15);
    let mut rng = from_seed(1);
    for _ in 0..200 {
        let (p, a, l) = random_params(&mut rng);
        let d = GeneralizedGamma::new(p, a, l).unwrap();
        let x = rng.random_range(0.01..5.0);
        let (got, want) = (density(&d, x).unwrap(), oracle_pdf(p, a, l, x));
        assert!((got - want).abs() <= 1e-12 * want.max(1e-300), "{p} {a} {l} at {x}: {got} vs {want}");
    }
}

#[test]
fn density_integrates_to_one() {
    let d = GeneralizedGamma::new(2.0, 3.7, 0.4).unwrap();
    let total = integrate(|x| d.pdf(x), 0.0, f64::INFINITY, 1e-12, 1e-10).unwrap().value;
    assert!((total - 1.0).abs() < 1e-6, "{total}");
}

#[test]
fn cdf_quantile_and_mean_match_closed_forms() {
    let mut rng = from_seed(2);
    for _ in 0..100 {
        let (p, a, l) = random_params(&mut rng);
        let d = GeneralizedGamma::new(p, a, l).unwrap();
        let inv = InverseGeneralizedGamma::new(p, a, l).unwrap();
        for u in [1e-6, 0.01, 0.3, 0.5, 0.9, 0.999] {
            let x = d.quantile(u);
            assert!((oracle_cdf(p, a, l, x) - u).abs() < 1e-9 * u.max(1e-3), "quantile {u} of ({p}, {a}, {l})");
            let y = inv.quantile(u);
            assert!(((1.0 - oracle_cdf(p, a, l, 1.0 / y)) - u).abs() < 1e-9 * u.max(1e-3));
        }
        let mean = (ln_gamma(a + 1.0 / p) - ln_gamma(a)).exp() / l.powf(1.0 / p);
        assert!((d.mean().unwrap() - mean).abs() < 1e-10 * mean);
    }
}

#[test]
fn sampler_within_dkw_band() {
    let n = 100_000;
    let band = dkw_epsilon(n, 1e-3);
    let mut rng = from_seed(3);
    for k in 0..20 {
        let (p, a, l) = if k == 0 { (2.0, 1.5, 0.7) } else { random_params(&mut rng) };
        let d = GeneralizedGamma::new(p, a, l).unwrap();
        let mut xs = sample(&d, n, 300 + k).unwrap();
        xs.sort_by(f64::total_cmp);
        let dev = xs
            .iter()
            .enumerate()
            .map(|(i, &x)| {
                let f = oracle_cdf(p, a, l, x);
                ((i + 1) as f64 / n as f64 - f).max(f - i as f64 / n as f64)
            })
            .fold(0.0, f64::max);
        assert!(dev <= band, "({p}, {a}, {l}): {dev} > {band}");
    }
}

#[test]
fn sample_mean_and_determinism() {
    let d = GeneralizedGamma::new(1.0, 2.0, 1.0).unwrap();
    let xs = sample(&d, 1_000_000, 11).unwrap();
    let mean = xs.iter().sum::<f64>() / xs.len() as f64;
    assert!((mean - 2.0).abs() < 0.01);
    assert_eq!(sample(&d, 10, 11).unwrap(), xs[..10].to_vec());
}

#[test]
fn transformed_densities_match_closed_forms() {
    let e = GeneralizedGamma::new(1.0, 1.0, 1.0).unwrap();
    let log_x = transformed_density(&e, &Transform::exp()).unwrap();
    for y in [-3.0, -0.5, 0.0, 0.7, 1.5] {
        let want = (y - f64::exp(y)).exp();
        assert!((log_x.pdf(y) - want).abs() < 1e-14, "{y}");
    }
    let r = GeneralizedGamma::new(2.0, 1.0, 1.0).unwrap();
    let sq = transformed_density(&r, &Transform::power(0.5).unwrap()).unwrap();
    for y in [0.1, 1.0, 3.0] {
        assert!((sq.pdf(y) - (-y).exp()).abs() < 1e-14);
    }
    let same = transformed_density(&r, &Transform::power(1.0).unwrap()).unwrap();
    assert!((same.pdf(0.8) - r.pdf(0.8)).abs() < 1e-15);
    let mut rng = from_seed(4);
    for _ in 0..10 {
        let (p, a, l) = random_params(&mut rng);
        let d = GeneralizedGamma::new(p, a, l).unwrap();
        let r: f64 = rng.random_range(-2.0..2.0);
        if r.abs() < 0.2 {
            continue;
        }
        let t = transformed_density(&d, &Transform::power(r).unwrap()).unwrap();
        let (lo, hi) = t.support();
        let total = integrate(|y| t.pdf(y), lo, hi, 1e-12, 1e-10).unwrap().value;
        assert!((total - 1.0).abs() < 1e-6);
    }
}

fn wrapped(d: GeneralizedGamma) -> DensitySpec {
    DensitySpec::from_ln_pdf("wrapped", move |x| d.ln_pdf(x), (0.0, f64::INFINITY)).unwrap()
}

/// The three analytic log-concavity cases, confirmed by the numeric scan on
/// an opaque copy of the same density.
#[test]
fn analytic_log_concavity_agrees_with_numeric_scan() {
    let mut rng = from_seed(5);
    for case in 0..3 {
        for _ in 0..50 {
            let p = rng.random_range(0.5..3.0);
            let l = rng.random_range(0.3..3.0);
            let (alpha, map) = match case {
                0 => {
                    let a = rng.random_range(1.0..5.0);
                    (a, PowerMap::Power(p))
                }
                1 => {
                    let a = rng.random_range(0.2..1.0);
                    (a, PowerMap::Power(a * p))
                }
                _ => (rng.random_range(0.2..5.0), PowerMap::Log),
            };
            let d = GeneralizedGamma::new(p, alpha, l).unwrap();
            let analytic = log_concavity_classify(&d, map).unwrap();
            assert_eq!((analytic.status, analytic.method), (LcStatus::LogConcave, Method::Analytic));
            let numeric = log_concavity_classify(&wrapped(d), map).unwrap();
            assert_eq!(numeric.method, Method::Numeric);
            assert_ne!(numeric.status, LcStatus::NotLogConcave, "case {case}: ({p}, {alpha}, {l}) {map:?} {numeric:?}");
        }
    }
}

#[test]
fn numeric_scan_finds_non_log_concavity() {
    let d = GeneralizedGamma::new(1.0, 0.5, 1.0).unwrap();
    let r = log_concavity_classify(&wrapped(d), PowerMap::Identity).unwrap();
    assert_eq!(r.status, LcStatus::NotLogConcave);
    assert!(r.witness.unwrap() < 0.05);
}

#[test]
fn lr_order_implies_empirical_st_order() {
    let mut rng = from_seed(6);
    for k in 0..20u64 {
        let (p, a, l) = random_params(&mut rng);
        let big = GeneralizedGamma::new(p, a + rng.random_range(0.1..1.5), l).unwrap();
        let small = GeneralizedGamma::new(p, a, l * rng.random_range(1.0..2.0)).unwrap();
        assert_eq!(lr_compare(&big, &small).unwrap().verdict, LrVerdict::D1Greater);
        assert_eq!(lr_compare(&small, &big).unwrap().verdict, LrVerdict::D2Greater);
        let sa = sample(&big, 100_000, 600 + 2 * k).unwrap();
        let sb = sample(&small, 100_000, 601 + 2 * k).unwrap();
        let v = st_compare_empirical(&sa, &sb, 0.01).unwrap();
        assert!(!matches!(v.relation, Relation::BDominates | Relation::Crossing), "pair {k}: {v:?}");
    }
}

#[test]
fn lr_analytic_and_numeric_agree_on_unordered_pairs() {
    let mut rng = from_seed(7);
    for _ in 0..10 {
        let (p, a, l) = random_params(&mut rng);
        // Larger shape and larger rate: the log ratio rises then falls.
        let d1 = GeneralizedGamma::new(p, a + 1.0, l * 2.0).unwrap();
        let d2 = GeneralizedGamma::new(p, a, l).unwrap();
        let analytic = lr_compare(&d1, &d2).unwrap();
        assert_eq!(analytic.verdict, LrVerdict::NotOrdered);
        let numeric = lr_compare(&wrapped(d1), &wrapped(d2)).unwrap();
        assert_eq!(numeric.verdict, LrVerdict::NotOrdered);
        let (w_a, w_n) = (analytic.witness.unwrap(), numeric.witness.unwrap());
        assert!((w_a - w_n).abs() < 0.1 * w_a, "turning points {w_a} and {w_n}");
    }
}

#[test]
fn reciprocal_laws_reverse_lr_order() {
    let a = InverseGeneralizedGamma::new(1.5, 3.0, 1.0).unwrap();
    let b = InverseGeneralizedGamma::new(1.5, 2.0, 1.0).unwrap();
    assert_eq!(lr_compare(&a, &b).unwrap().verdict, LrVerdict::D2Greater);
}
