use alloc::format;
use alloc::vec::Vec;

use super::{sample_sums, weighted_mean, MIN_SAMPLES, ORACLE_TOL};
use crate::distributions::DistSpec;
use crate::majorization::{check_majorize, MajorizationMode, WeightVector, DEFAULT_TOL};
use crate::orders::{
    convolve_weighted, crossing_count, st_compare_empirical, st_compare_exact, ConvolutionConfig, OrderVerdict,
    Relation,
};
use crate::rng::derive_seed;
use crate::{Error, Result};

/// Allowed gap between the two analytic means.
pub const MEAN_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct CounterexampleReport {
    pub alpha: f64,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub oracle: OrderVerdict,
    pub crossings: usize,
    pub mean_a: f64,
    pub mean_b: f64,
    /// Monte Carlo comparison; informational only.
    pub empirical: Option<OrderVerdict>,
    /// The oracle shows exactly one crossing and the means agree, so no
    /// stochastic order holds in either direction.
    pub demonstrated: bool,
}

/// Compares `Σ aᵢ Xᵢ` with `Σ bᵢ Xᵢ` for iid gamma(α, 1) variables when `a`
/// majorizes `b` and the two differ in exactly two coordinates. Equal means
/// rule out stochastic dominance, and the oracle exhibits the crossing.
/// `budget` Monte Carlo samples per sum are drawn when nonzero.
pub fn run_counterexample(
    alpha: f64,
    a: &WeightVector,
    b: &WeightVector,
    budget: usize,
    seed: u64,
) -> Result<CounterexampleReport> {
    if !(alpha >= 1.0 && alpha.is_finite()) {
        return Err(Error::Parameter(format!("alpha must be finite and at least 1, got {alpha}")));
    }
    let n = a.len();
    if b.len() != n {
        return Err(Error::Dimension(format!("a has {n} entries, b has {}", b.len())));
    }
    if n < 3 {
        return Err(Error::Dimension(format!("need at least 3 coordinates, got {n}")));
    }
    a.require_nonnegative("a")?;
    b.require_nonnegative("b")?;
    if budget != 0 && budget < MIN_SAMPLES {
        return Err(Error::Parameter(format!("budget must be 0 or at least {MIN_SAMPLES}, got {budget}")));
    }
    if !check_majorize(b, a, MajorizationMode::Full, DEFAULT_TOL)? {
        return Err(Error::Parameter(format!("{a} does not majorize {b}")));
    }
    let differing = a.values().iter().zip(b.values()).filter(|(x, y)| x != y).count();
    if differing != 2 {
        return Err(Error::Parameter(format!(
            "a and b must differ in exactly 2 positions, they differ in {differing}"
        )));
    }

    let x = DistSpec::gen_gamma(1.0, alpha, 1.0)?;
    let dists = alloc::vec![x; n];
    let cfg = ConvolutionConfig::default();
    let fa = convolve_weighted(&dists, a.values(), &cfg)?;
    let fb = convolve_weighted(&dists, b.values(), &cfg)?;
    let oracle = st_compare_exact(&fa, &fb, ORACLE_TOL)?;
    let crossings = crossing_count(&fa, &fb, ORACLE_TOL)?;
    let mean_a = weighted_mean(&dists, a.values()).expect("gamma means are finite");
    let mean_b = weighted_mean(&dists, b.values()).expect("gamma means are finite");

    let empirical = if budget == 0 {
        None
    } else {
        let sa = sample_sums(&dists, a.values(), budget, derive_seed(seed, 0));
        let sb = sample_sums(&dists, b.values(), budget, derive_seed(seed, 1));
        Some(st_compare_empirical(&sa, &sb, 0.01)?)
    };
    let demonstrated = oracle.relation == Relation::Crossing && crossings == 1 && (mean_a - mean_b).abs() < MEAN_TOL;
    Ok(CounterexampleReport {
        alpha,
        a: a.values().to_vec(),
        b: b.values().to_vec(),
        oracle,
        crossings,
        mean_a,
        mean_b,
        empirical,
        demonstrated,
    })
}
