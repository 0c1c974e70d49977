use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng as _;

use super::{Scenario, ScenarioOutcome};
use crate::distributions::DistSpec;
use crate::majorization::{MajorizationMode, WeightVector};
use crate::math::{exp, ln};
use crate::rng::{derive_seed, from_seed, Rng};
use crate::transforms::{power_pair, Transform, Variant};
use crate::{Error, Result};

/// Scenario families with known-valid hypotheses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Preset {
    /// `phi = psi = exp`, iid generalized gamma
    ExpIid,
    /// power pair with `p, q < 0`, iid reciprocal generalized gamma
    A0Iid,
    /// power pair in A1, iid reciprocal generalized gamma
    A1Iid,
    /// power pair in A2, iid generalized gamma
    A2Iid,
    /// power pair in A3 (concave case), iid generalized gamma
    A3Iid,
    /// `phi = log(x + e)`, `psi = x^{1/p}` with `p ≥ 2` (concave case)
    LogShiftIid,
    /// `phi = psi = exp`, lr-decreasing chain
    ChainExp,
    /// A3 pair, lr-decreasing chain
    ChainA3,
    /// A2 pair, lr-decreasing chain
    ChainA2,
    /// A1 pair, lr-decreasing chain of reciprocal laws
    ChainA1,
}

impl Preset {
    pub const ALL: [Preset; 10] = [
        Preset::ExpIid,
        Preset::A0Iid,
        Preset::A1Iid,
        Preset::A2Iid,
        Preset::A3Iid,
        Preset::LogShiftIid,
        Preset::ChainExp,
        Preset::ChainA3,
        Preset::ChainA2,
        Preset::ChainA1,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Preset::ExpIid => "exp-iid",
            Preset::A0Iid => "a0-iid",
            Preset::A1Iid => "a1-iid",
            Preset::A2Iid => "a2-iid",
            Preset::A3Iid => "a3-iid",
            Preset::LogShiftIid => "logshift-iid",
            Preset::ChainExp => "exp-chain",
            Preset::ChainA3 => "a3-chain",
            Preset::ChainA2 => "a2-chain",
            Preset::ChainA1 => "a1-chain",
        }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name() == name)
            .ok_or_else(|| Error::Parameter(format!("unknown preset {name:?}")))
    }

    pub fn variant(self) -> Variant {
        match self {
            Preset::A3Iid | Preset::LogShiftIid | Preset::ChainA3 => Variant::Concave,
            _ => Variant::Convex,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteConfig {
    pub seed: u64,
    pub per_preset: usize,
    pub presets: Vec<Preset>,
    pub n_samples: usize,
    pub delta: f64,
    /// Vector lengths are drawn from `2 ..= max_n`.
    pub max_n: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self { seed: 42, per_preset: 24, presets: Preset::ALL.to_vec(), n_samples: 100_000, delta: 0.01, max_n: 5 }
    }
}

fn uniform(rng: &mut Rng, lo: f64, hi: f64) -> f64 {
    if lo == hi {
        lo
    } else {
        rng.random_range(lo..hi)
    }
}

fn log_uniform(rng: &mut Rng, lo: f64, hi: f64) -> f64 {
    exp(uniform(rng, ln(lo), ln(hi)))
}

/// `(a, b)` with `phi⁻¹(b) ⪯ phi⁻¹(a)` in `mode`: random T-transforms of
/// `u = phi⁻¹(a)`, then for weak modes a random move of some coordinates in
/// the direction the mode allows.
fn weights(
    rng: &mut Rng,
    n: usize,
    phi: &Transform,
    mode: MajorizationMode,
    a_range: (f64, f64),
) -> Result<(WeightVector, WeightVector)> {
    let a: Vec<f64> = (0..n).map(|_| log_uniform(rng, a_range.0, a_range.1)).collect();
    let u: Vec<f64> = a.iter().map(|&x| phi.inverse(x)).collect::<Result<_>>()?;
    let mut v = u.clone();
    let moves = rng.random_range(1..=3);
    for _ in 0..moves {
        let i = rng.random_range(0..n);
        let j = (i + rng.random_range(1..n)) % n;
        let lam = uniform(rng, 0.0, 1.0);
        let (x, y) = (v[i], v[j]);
        v[i] = lam * x + (1.0 - lam) * y;
        v[j] = (1.0 - lam) * x + lam * y;
    }
    for x in &mut v {
        if rng.random_bool(0.5) {
            let step = uniform(rng, 0.0, 0.3) * x.abs();
            match mode {
                MajorizationMode::WeakSub => *x -= step,
                MajorizationMode::WeakSup => *x += step,
                MajorizationMode::Full => {}
            }
        }
    }
    let b: Vec<f64> = v.iter().map(|&x| phi.eval(x)).collect();
    Ok((WeightVector::new(a)?, WeightVector::new(b)?))
}

fn pick_mode(rng: &mut Rng, weak: MajorizationMode) -> MajorizationMode {
    if rng.random_bool(0.5) {
        MajorizationMode::Full
    } else {
        weak
    }
}

// q with 1/p + 1/q on the A1/A2 boundary or strictly inside, p < 1.
fn a12_q(rng: &mut Rng, p: f64) -> f64 {
    let q_star = p / (p - 1.0);
    if rng.random_bool(0.25) {
        return q_star;
    }
    if p < 0.0 {
        q_star * uniform(rng, 0.4, 1.0)
    } else {
        q_star * uniform(rng, 1.0, 2.0)
    }
}

fn a3_q(rng: &mut Rng, p: f64) -> f64 {
    let q_star = p / (p - 1.0);
    if rng.random_bool(0.25) {
        q_star
    } else {
        q_star * uniform(rng, 1.0, 2.0)
    }
}

// Strictly increasing positive sequence starting near `start`.
fn increasing(rng: &mut Rng, n: usize, start: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n);
    let mut x = start;
    for _ in 0..n {
        out.push(x);
        x *= uniform(rng, 1.1, 1.6);
    }
    out
}

fn generate(preset: Preset, rng: &mut Rng, cfg: &SuiteConfig, name: String, seed: u64) -> Result<Scenario> {
    let n = rng.random_range(2..=cfg.max_n.max(2));
    let variant = preset.variant();
    let lambda = uniform(rng, 0.5, 2.0);
    let (phi, psi, dists, a_range) = match preset {
        Preset::ExpIid | Preset::ChainExp => {
            let p = uniform(rng, 0.5, 3.0);
            let alpha_lo = (1.0 / p).max(0.5);
            let alpha = uniform(rng, alpha_lo, alpha_lo + 3.0);
            let dists = if preset == Preset::ExpIid {
                vec![DistSpec::gen_gamma(p, alpha, lambda)?; n]
            } else {
                increasing(rng, n, lambda)
                    .into_iter()
                    .map(|l| DistSpec::gen_gamma(p, alpha, l))
                    .collect::<Result<_>>()?
            };
            (Transform::exp(), Transform::exp(), dists, (0.1, 10.0))
        }
        Preset::A0Iid => {
            let p = uniform(rng, -3.0, -1.0);
            let q = uniform(rng, -3.0, -0.5);
            let (phi, psi) = power_pair(p, q)?;
            let alpha = uniform(rng, 3.0, 5.0);
            (phi, psi, vec![DistSpec::inv_gen_gamma(-p, alpha, lambda)?; n], (0.1, 10.0))
        }
        Preset::A1Iid | Preset::ChainA1 => {
            let p = uniform(rng, -3.0, -1.0);
            let q = a12_q(rng, p);
            let (phi, psi) = power_pair(p, q)?;
            let alpha = uniform(rng, 3.0, 5.0);
            let dists = if preset == Preset::A1Iid {
                vec![DistSpec::inv_gen_gamma(-p, alpha, lambda)?; n]
            } else {
                // Larger base rate means a smaller reciprocal: rates decrease.
                let mut rates = increasing(rng, n, lambda);
                rates.reverse();
                rates.into_iter().map(|l| DistSpec::inv_gen_gamma(-p, alpha, l)).collect::<Result<_>>()?
            };
            (phi, psi, dists, (0.1, 10.0))
        }
        Preset::A2Iid | Preset::ChainA2 => {
            let p = uniform(rng, 0.5, 0.9);
            let q = a12_q(rng, p);
            let (phi, psi) = power_pair(p, q)?;
            let alpha_lo = 1.0 / p;
            let dists = chain_or_iid(rng, preset == Preset::A2Iid, n, p, alpha_lo, lambda)?;
            (phi, psi, dists, (0.1, 10.0))
        }
        Preset::A3Iid | Preset::ChainA3 => {
            let p = uniform(rng, 1.2, 4.0);
            let q = a3_q(rng, p);
            let (phi, psi) = power_pair(p, q)?;
            let dists = chain_or_iid(rng, preset == Preset::A3Iid, n, p, 1.0, lambda)?;
            (phi, psi, dists, (0.1, 10.0))
        }
        Preset::LogShiftIid => {
            let p = uniform(rng, 2.0, 4.0);
            let alpha = uniform(rng, 1.0, 4.0);
            let dists = vec![DistSpec::gen_gamma(p, alpha, lambda)?; n];
            (Transform::log_shift(), Transform::power(1.0 / p)?, dists, (1.0, 4.0))
        }
    };
    let mode = pick_mode(rng, super::licensed_weak_mode(variant, &phi));
    let (a, b) = weights(rng, n, &phi, mode, a_range)?;
    Ok(Scenario {
        name,
        dists,
        phi,
        psi,
        variant,
        a,
        b,
        premise_mode: mode,
        n_samples: cfg.n_samples,
        seed,
        delta: cfg.delta,
    })
}

// Generalized gamma with power p: one law repeated, or a chain with shapes
// decreasing from above `alpha_lo` and rates increasing.
fn chain_or_iid(rng: &mut Rng, iid: bool, n: usize, p: f64, alpha_lo: f64, lambda: f64) -> Result<Vec<DistSpec>> {
    let alpha = uniform(rng, alpha_lo, alpha_lo + 3.0);
    if iid {
        return Ok(vec![DistSpec::gen_gamma(p, alpha, lambda)?; n]);
    }
    let mut shapes = increasing(rng, n, alpha);
    shapes.reverse();
    let shapes: Vec<f64> = shapes.iter().map(|s| s / shapes[n - 1] * alpha).collect();
    let rates = increasing(rng, n, lambda);
    shapes.into_iter().zip(rates).map(|(s, l)| DistSpec::gen_gamma(p, s, l)).collect()
}

/// Deterministic scenarios: `per_preset` per preset, each drawn from its
/// own stream derived from `seed`.
pub fn generate_suite(cfg: &SuiteConfig) -> Result<Vec<Scenario>> {
    if cfg.max_n < 2 {
        return Err(Error::Parameter(format!("max_n must be at least 2, got {}", cfg.max_n)));
    }
    let mut out = Vec::with_capacity(cfg.presets.len() * cfg.per_preset);
    for (pi, &preset) in cfg.presets.iter().enumerate() {
        for k in 0..cfg.per_preset {
            let stream = derive_seed(cfg.seed, ((pi as u64) << 32) | k as u64);
            let mut rng = from_seed(stream);
            let name = format!("{}-{k:03}", preset.name());
            out.push(generate(preset, &mut rng, cfg, name, derive_seed(stream, u64::MAX))?);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SuiteSummary {
    pub total: usize,
    pub consistent: usize,
    pub inconsistent: usize,
    pub skipped_precondition: usize,
    pub skipped_unverified: usize,
    pub failed: usize,
    /// Verified scenarios that also had a convolution oracle.
    pub with_oracle: usize,
    pub inconsistent_names: Vec<String>,
}

pub fn summarize(outcomes: &[ScenarioOutcome]) -> SuiteSummary {
    let mut s = SuiteSummary { total: outcomes.len(), ..Default::default() };
    for o in outcomes {
        match o {
            ScenarioOutcome::Verified(r) => {
                if r.oracle_verdict.is_some() {
                    s.with_oracle += 1;
                }
                if r.consistent {
                    s.consistent += 1;
                } else {
                    s.inconsistent += 1;
                    s.inconsistent_names.push(r.scenario.clone());
                }
            }
            ScenarioOutcome::SkippedPrecondition { .. } => s.skipped_precondition += 1,
            ScenarioOutcome::SkippedUnverified { .. } => s.skipped_unverified += 1,
            ScenarioOutcome::Failed { .. } => s.failed += 1,
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::{check_hypotheses, Status};

    #[test]
    fn generation_is_deterministic() {
        let cfg = SuiteConfig { per_preset: 3, ..Default::default() };
        assert_eq!(generate_suite(&cfg).unwrap(), generate_suite(&cfg).unwrap());
        let other = SuiteConfig { seed: 7, ..cfg.clone() };
        assert_ne!(generate_suite(&cfg).unwrap(), generate_suite(&other).unwrap());
    }

    #[test]
    fn generated_hypotheses_all_pass() {
        let cfg = SuiteConfig { per_preset: 6, ..Default::default() };
        for s in generate_suite(&cfg).unwrap() {
            let h = check_hypotheses(&s).unwrap();
            assert_eq!(h.overall(), Status::Pass, "{}: {h:?}", s.name);
        }
    }

    #[test]
    fn preset_names_round_trip() {
        for p in Preset::ALL {
            assert_eq!(Preset::from_name(p.name()).unwrap(), p);
        }
        assert!(Preset::from_name("nope").is_err());
    }
}
