//! Scenario verification: hypothesis checks, Monte Carlo comparison of the
//! two weighted sums, a convolution oracle for small `n`, the crossing
//! counterexample and randomized suites.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::distributions::{
    log_concavity_classify, lr_compare, transformed_density, Continuous, DistSpec, LcStatus, LrVerdict, PowerMap,
};
use crate::grid::LogGrid;
use crate::majorization::{check_majorize, MajorizationMode, WeightVector, DEFAULT_TOL};
use crate::orders::{
    convolve_weighted, st_compare_empirical, st_compare_exact, ConvolutionConfig, OrderVerdict, Relation,
};
use crate::rng::{derive_seed, from_seed};
use crate::transforms::{check_convexity_conditions, Direction, Transform, TransformKind, Variant};
use crate::{Error, Result};

mod counterexample;
mod suite;

pub use counterexample::{run_counterexample, CounterexampleReport};
pub use suite::{generate_suite, summarize, Preset, SuiteConfig, SuiteSummary};

/// Largest `n` for which the convolution oracle is run.
pub const ORACLE_MAX_N: usize = 4;
/// Allowance for oracle cdf differences.
pub const ORACLE_TOL: f64 = 1e-6;
pub const MIN_SAMPLES: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Unknown,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Unknown => "UNKNOWN",
        }
    }

    fn and(self, other: Status) -> Status {
        match (self, other) {
            (Status::Fail, _) | (_, Status::Fail) => Status::Fail,
            (Status::Unknown, _) | (_, Status::Unknown) => Status::Unknown,
            _ => Status::Pass,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub status: Status,
    pub detail: String,
}

impl Check {
    fn pass(detail: impl Into<String>) -> Self {
        Self { status: Status::Pass, detail: detail.into() }
    }
    fn fail(detail: impl Into<String>) -> Self {
        Self { status: Status::Fail, detail: detail.into() }
    }
    fn unknown(detail: impl Into<String>) -> Self {
        Self { status: Status::Unknown, detail: detail.into() }
    }
}

/// The four hypotheses of a scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct HypothesisReport {
    /// `phi⁻¹(b) ⪯ phi⁻¹(a)` in the premise mode, and that mode is licensed.
    pub majorization_ok: Check,
    /// Sign and product conditions on `(phi, psi)`.
    pub conditions_ok: Check,
    /// `psi⁻¹(Xᵢ)` log-concave for every `i`.
    pub logconcavity_ok: Check,
    /// `X₁ ≥_lr X₂ ≥_lr … ≥_lr Xₙ` (trivial for identical laws).
    pub lr_chain_ok: Check,
}

impl HypothesisReport {
    pub fn overall(&self) -> Status {
        self.majorization_ok
            .status
            .and(self.conditions_ok.status)
            .and(self.logconcavity_ok.status)
            .and(self.lr_chain_ok.status)
    }

    fn first_with(&self, status: Status) -> Option<(&'static str, &Check)> {
        [
            ("majorization", &self.majorization_ok),
            ("conditions", &self.conditions_ok),
            ("log-concavity", &self.logconcavity_ok),
            ("lr chain", &self.lr_chain_ok),
        ]
        .into_iter()
        .find(|(_, c)| c.status == status)
    }
}

/// One claim to test: `Σ aᵢ Xᵢ` against `Σ bᵢ Xᵢ`.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    /// One law per coordinate; identical entries make the scenario iid.
    pub dists: Vec<DistSpec>,
    pub phi: Transform,
    pub psi: Transform,
    pub variant: Variant,
    pub a: WeightVector,
    pub b: WeightVector,
    pub premise_mode: MajorizationMode,
    pub n_samples: usize,
    pub seed: u64,
    pub delta: f64,
}

impl Scenario {
    pub fn n(&self) -> usize {
        self.a.len()
    }

    pub fn is_iid(&self) -> bool {
        self.dists.windows(2).all(|w| w[0] == w[1])
    }

    fn validate(&self) -> Result<()> {
        let n = self.a.len();
        if self.b.len() != n {
            return Err(Error::Dimension(format!("a has {n} entries, b has {}", self.b.len())));
        }
        if self.dists.len() != n {
            return Err(Error::Dimension(format!("{n} weights but {} distributions", self.dists.len())));
        }
        self.a.require_nonnegative("a")?;
        self.b.require_nonnegative("b")?;
        if self.n_samples < MIN_SAMPLES {
            return Err(Error::Parameter(format!("n_samples must be at least {MIN_SAMPLES}, got {}", self.n_samples)));
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(Error::Parameter(format!("delta must lie in (0, 1), got {}", self.delta)));
        }
        Ok(())
    }

    /// Weights in the order they multiply `X₁, …, Xₙ`: as given for iid
    /// laws; otherwise decreasing in the convex case and increasing in the
    /// concave case, against the decreasing lr chain.
    pub fn arranged(&self, w: &WeightVector) -> Vec<f64> {
        if self.is_iid() {
            return w.values().to_vec();
        }
        let mut v = w.sorted_increasing().into_vec();
        if self.variant == Variant::Convex {
            v.reverse();
        }
        v
    }

    /// `A` stochastically dominates in the convex case, `B` in the concave
    /// case.
    pub fn predicted(&self) -> Relation {
        match self.variant {
            Variant::Convex => Relation::ADominates,
            Variant::Concave => Relation::BDominates,
        }
    }
}

/// Weak mode licensed by the variant and the direction of `phi`.
pub fn licensed_weak_mode(variant: Variant, phi: &Transform) -> MajorizationMode {
    match (variant, phi.direction()) {
        (Variant::Convex, Direction::Increasing) | (Variant::Concave, Direction::Decreasing) => {
            MajorizationMode::WeakSub
        }
        (Variant::Convex, Direction::Decreasing) | (Variant::Concave, Direction::Increasing) => {
            MajorizationMode::WeakSup
        }
    }
}

/// The map `psi⁻¹` applied to `X` for the log-concavity hypothesis, when it
/// is a power or a logarithm.
fn psi_inverse_map(psi: &Transform) -> Option<PowerMap> {
    match psi.kind() {
        TransformKind::Power(r) => Some(PowerMap::Power(1.0 / r)),
        TransformKind::Exp => Some(PowerMap::Log),
        _ => None,
    }
}

fn check_premise(s: &Scenario, u: &WeightVector, v: &WeightVector) -> Check {
    let licensed = licensed_weak_mode(s.variant, &s.phi);
    if s.premise_mode != MajorizationMode::Full && s.premise_mode != licensed {
        return Check::fail(format!(
            "weak mode {} is not licensed for a {} {} case; use {} or m",
            s.premise_mode.name(),
            if s.phi.direction() == Direction::Increasing { "increasing" } else { "decreasing" },
            s.variant.name(),
            licensed.name()
        ));
    }
    match check_majorize(v, u, s.premise_mode, DEFAULT_TOL) {
        Ok(true) => Check::pass(format!("phi⁻¹(b) ⪯_{} phi⁻¹(a)", s.premise_mode.name())),
        Ok(false) => {
            Check::fail(format!("phi⁻¹(b) = {v} is not majorized ({}) by phi⁻¹(a) = {u}", s.premise_mode.name()))
        }
        Err(e) => Check::fail(e.to_string()),
    }
}

fn check_conditions(s: &Scenario) -> Check {
    match check_convexity_conditions(&s.phi, &s.psi, s.variant, &LogGrid::default_axis()) {
        Ok(r) if r.holds() => Check::pass("sign and product conditions hold on the grid"),
        Ok(r) => {
            let c = if r.sign.holds { &r.product } else { &r.sign };
            let what = if r.sign.holds { "product" } else { "sign" };
            let at = match c.worst_v {
                Some(v) => format!("(u, v) = ({}, {v})", c.worst_u),
                None => format!("u = {}", c.worst_u),
            };
            Check::fail(format!("{what} condition fails at {at}, relative margin {:e}", -c.worst_violation))
        }
        Err(e) => Check::unknown(format!("conditions not evaluable: {e}")),
    }
}

fn check_log_concavity(s: &Scenario) -> Check {
    let mut distinct: Vec<&DistSpec> = Vec::new();
    for d in &s.dists {
        if !distinct.contains(&d) {
            distinct.push(d);
        }
    }
    let mut status = Status::Pass;
    let mut notes = Vec::new();
    for d in distinct {
        let report = match psi_inverse_map(&s.psi) {
            Some(map) => log_concavity_classify(d, map),
            None => transformed_density(d, &s.psi).and_then(|t| log_concavity_classify(&t, PowerMap::Identity)),
        };
        let (st, note) = match report {
            Ok(r) => match r.status {
                LcStatus::LogConcave => (Status::Pass, None),
                LcStatus::NotLogConcave => (
                    Status::Fail,
                    Some(format!(
                        "psi⁻¹ of {} is not log-concave (witness {})",
                        d.label(),
                        r.witness.map_or("none".into(), |w| format!("{w}"))
                    )),
                ),
                LcStatus::Unknown => {
                    (Status::Unknown, Some(format!("log-concavity of psi⁻¹ of {} unproven", d.label())))
                }
            },
            Err(e) => (Status::Unknown, Some(format!("{}: {e}", d.label()))),
        };
        status = status.and(st);
        notes.extend(note);
    }
    let detail = if notes.is_empty() { "all log-concave".to_string() } else { notes.join("; ") };
    Check { status, detail }
}

fn check_lr_chain(s: &Scenario) -> Check {
    if s.is_iid() {
        return Check::pass("identically distributed");
    }
    let mut status = Status::Pass;
    let mut notes = Vec::new();
    for (i, w) in s.dists.windows(2).enumerate() {
        match lr_compare(&w[0], &w[1]) {
            Ok(r) => match r.verdict {
                LrVerdict::D1Greater => {}
                LrVerdict::D2Greater | LrVerdict::NotOrdered => {
                    status = Status::Fail;
                    notes.push(format!("X{} ≥_lr X{} fails ({})", i + 1, i + 2, r.verdict.name()));
                }
                LrVerdict::Unknown => {
                    status = status.and(Status::Unknown);
                    notes.push(format!("X{} ≥_lr X{} unproven", i + 1, i + 2));
                }
            },
            Err(e) => {
                status = status.and(Status::Unknown);
                notes.push(format!("X{} vs X{}: {e}", i + 1, i + 2));
            }
        }
    }
    let detail = if notes.is_empty() { "decreasing lr chain".to_string() } else { notes.join("; ") };
    Check { status, detail }
}

/// Evaluates all four hypotheses without sampling. Weights outside the
/// range of `phi` are a domain error.
pub fn check_hypotheses(s: &Scenario) -> Result<HypothesisReport> {
    s.validate()?;
    let u = s.a.try_map(|x| s.phi.inverse(x))?;
    let v = s.b.try_map(|x| s.phi.inverse(x))?;
    Ok(HypothesisReport {
        majorization_ok: check_premise(s, &u, &v),
        conditions_ok: check_conditions(s),
        logconcavity_ok: check_log_concavity(s),
        lr_chain_ok: check_lr_chain(s),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct TheoremReport {
    pub scenario: String,
    pub hypothesis: HypothesisReport,
    pub predicted: Relation,
    /// Weights applied to `X₁, …, Xₙ`.
    pub arranged_a: Vec<f64>,
    pub arranged_b: Vec<f64>,
    /// Monte Carlo comparison.
    pub verdict: OrderVerdict,
    /// Convolution oracle, for `n ≤ 4`.
    pub oracle_verdict: Option<OrderVerdict>,
    /// Why the oracle is absent, when it is.
    pub oracle_note: Option<String>,
    pub mean_a: Option<f64>,
    pub mean_b: Option<f64>,
    /// Neither the empirical test nor the oracle contradicts the prediction.
    pub consistent: bool,
}

/// Verifies an iid scenario; see [`verify`].
pub fn verify_iid_theorem(s: &Scenario) -> Result<TheoremReport> {
    if !s.is_iid() {
        return Err(Error::Parameter(format!("scenario {} is not identically distributed", s.name)));
    }
    verify(s)
}

/// Verifies a scenario with an lr-ordered chain; see [`verify`]. A chain
/// that is not proven is a precondition error.
pub fn verify_noniid_theorem(s: &Scenario) -> Result<TheoremReport> {
    let h = check_hypotheses(s)?;
    if h.lr_chain_ok.status != Status::Pass {
        return Err(Error::Precondition(format!("{}: lr chain: {}", s.name, h.lr_chain_ok.detail)));
    }
    verify(s)
}

/// Checks hypotheses, then compares `Σ aᵢ Xᵢ` with `Σ bᵢ Xᵢ` by Monte Carlo
/// (independent streams for the two sums) and, for `n ≤ 4`, by numerical
/// convolution. A failed hypothesis is a precondition error and an unproven
/// one an unverified error; neither is a counterexample.
pub fn verify(s: &Scenario) -> Result<TheoremReport> {
    let hypothesis = check_hypotheses(s)?;
    if let Some((name, c)) = hypothesis.first_with(Status::Fail) {
        return Err(Error::Precondition(format!("{}: {name}: {}", s.name, c.detail)));
    }
    if let Some((name, c)) = hypothesis.first_with(Status::Unknown) {
        return Err(Error::Unverified(format!("{}: {name}: {}", s.name, c.detail)));
    }
    let wa = s.arranged(&s.a);
    let wb = s.arranged(&s.b);
    let sa = sample_sums(&s.dists, &wa, s.n_samples, derive_seed(s.seed, 0));
    let sb = sample_sums(&s.dists, &wb, s.n_samples, derive_seed(s.seed, 1));
    let verdict = st_compare_empirical(&sa, &sb, s.delta)?;

    let (oracle_verdict, oracle_note) = if s.n() <= ORACLE_MAX_N {
        match oracle_compare(&s.dists, &wa, &wb) {
            Ok(v) => (Some(v), None),
            Err(e) => (None, Some(format!("oracle unavailable: {e}"))),
        }
    } else {
        (None, Some(format!("oracle skipped for n = {} > {ORACLE_MAX_N}", s.n())))
    };

    let predicted = s.predicted();
    let consistent =
        !contradicts(predicted, verdict.relation) && oracle_verdict.is_none_or(|o| !oracle_contradicts(predicted, &o));
    Ok(TheoremReport {
        scenario: s.name.clone(),
        hypothesis,
        predicted,
        mean_a: weighted_mean(&s.dists, &wa),
        mean_b: weighted_mean(&s.dists, &wb),
        arranged_a: wa,
        arranged_b: wb,
        verdict,
        oracle_verdict,
        oracle_note,
        consistent,
    })
}

fn contradicts(predicted: Relation, observed: Relation) -> bool {
    observed == Relation::Crossing || observed == predicted.swapped()
}

fn oracle_contradicts(predicted: Relation, o: &OrderVerdict) -> bool {
    match predicted {
        Relation::ADominates => o.max_a_over_b > ORACLE_TOL,
        Relation::BDominates => o.max_b_over_a > ORACLE_TOL,
        _ => false,
    }
}

pub(crate) fn oracle_compare(dists: &[DistSpec], wa: &[f64], wb: &[f64]) -> Result<OrderVerdict> {
    let cfg = ConvolutionConfig::default();
    let fa = convolve_weighted(dists, wa, &cfg)?;
    let fb = convolve_weighted(dists, wb, &cfg)?;
    st_compare_exact(&fa, &fb, ORACLE_TOL)
}

pub(crate) fn sample_sums(dists: &[DistSpec], w: &[f64], n: usize, seed: u64) -> Vec<f64> {
    let mut rng = from_seed(seed);
    (0..n).map(|_| dists.iter().zip(w).map(|(d, &wi)| wi * d.sample(&mut rng)).sum()).collect()
}

pub(crate) fn weighted_mean(dists: &[DistSpec], w: &[f64]) -> Option<f64> {
    dists
        .iter()
        .zip(w)
        .try_fold(0.0, |acc, (d, &wi)| if wi == 0.0 { Some(acc) } else { d.mean().map(|m| acc + wi * m) })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExchangeReport {
    /// Weights `phi(c)` sorted decreasing: the larger sits on `d1` in the
    /// dominant sum and on `d2` in the swapped one.
    pub weights: [f64; 2],
    /// Largest excess of the dominant sum's cdf over the swapped one.
    pub max_violation: f64,
    /// Point of the largest excess.
    pub witness: Option<f64>,
    /// `max_violation` is within the oracle tolerance.
    pub holds: bool,
}

/// Exchange inequality for `d1 ≥_lr d2`: with weights `phi(c₁)`, `phi(c₂)`,
/// placing the larger weight on `d1` gives a stochastically larger sum than
/// the swapped placement. Both sums come from the convolution oracle and are
/// compared on `t_grid`, or on the oracle's own grid when it is `None`.
pub fn pairwise_exchange_check(
    d1: &DistSpec,
    d2: &DistSpec,
    c: &WeightVector,
    phi: &Transform,
    t_grid: Option<&[f64]>,
) -> Result<ExchangeReport> {
    if c.len() != 2 {
        return Err(Error::Dimension(format!("exchange check needs 2 coefficients, got {}", c.len())));
    }
    let lr = lr_compare(d1, d2)?.verdict;
    if lr != LrVerdict::D1Greater {
        return Err(Error::Precondition(format!("{} ≥_lr {} does not hold ({})", d1.label(), d2.label(), lr.name())));
    }
    let (w1, w2) = (phi.eval(c.values()[0]), phi.eval(c.values()[1]));
    if !(w1 >= 0.0 && w2 >= 0.0 && w1.is_finite() && w2.is_finite()) {
        return Err(Error::Domain(format!("weights phi(c) = ({w1}, {w2}) must be finite and nonnegative")));
    }
    let (big, small) = if w1 >= w2 { (w1, w2) } else { (w2, w1) };
    let dists = [*d1, *d2];
    let cfg = ConvolutionConfig::default();
    let dominant = convolve_weighted(&dists, &[big, small], &cfg)?;
    let swapped = convolve_weighted(&dists, &[small, big], &cfg)?;
    let (max_violation, witness) = match t_grid {
        Some(ts) => {
            let mut worst = (0.0, None);
            for &t in ts {
                let d = dominant.eval(t) - swapped.eval(t);
                if d > worst.0 {
                    worst = (d, Some(t));
                }
            }
            worst
        }
        None => {
            let v = st_compare_exact(&dominant, &swapped, ORACLE_TOL)?;
            (v.max_a_over_b.max(0.0), (v.max_a_over_b > 0.0).then_some(v.witness_a_over_b))
        }
    };
    Ok(ExchangeReport { weights: [big, small], max_violation, witness, holds: max_violation <= ORACLE_TOL })
}

/// Outcome of running one scenario inside a suite.
#[derive(Debug, Clone, PartialEq)]
#[allow(clippy::large_enum_variant)]
pub enum ScenarioOutcome {
    Verified(TheoremReport),
    /// A hypothesis failed.
    SkippedPrecondition {
        scenario: String,
        reason: String,
    },
    /// A hypothesis could not be decided.
    SkippedUnverified {
        scenario: String,
        reason: String,
    },
    Failed {
        scenario: String,
        error: Error,
    },
}

impl ScenarioOutcome {
    pub fn scenario(&self) -> &str {
        match self {
            ScenarioOutcome::Verified(r) => &r.scenario,
            ScenarioOutcome::SkippedPrecondition { scenario, .. }
            | ScenarioOutcome::SkippedUnverified { scenario, .. }
            | ScenarioOutcome::Failed { scenario, .. } => scenario,
        }
    }
}

pub fn run_scenario(s: &Scenario) -> ScenarioOutcome {
    match verify(s) {
        Ok(r) => ScenarioOutcome::Verified(r),
        Err(Error::Precondition(reason)) => ScenarioOutcome::SkippedPrecondition { scenario: s.name.clone(), reason },
        Err(Error::Unverified(reason)) => ScenarioOutcome::SkippedUnverified { scenario: s.name.clone(), reason },
        Err(error) => ScenarioOutcome::Failed { scenario: s.name.clone(), error },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn exp_scenario(a: &[f64], b: &[f64]) -> Scenario {
        let d = DistSpec::exponential(1.0).unwrap();
        Scenario {
            name: "t".into(),
            dists: vec![d; a.len()],
            phi: Transform::exp(),
            psi: Transform::exp(),
            variant: Variant::Convex,
            a: WeightVector::new(a.to_vec()).unwrap(),
            b: WeightVector::new(b.to_vec()).unwrap(),
            premise_mode: MajorizationMode::Full,
            n_samples: 20_000,
            seed: 42,
            delta: 0.01,
        }
    }

    #[test]
    fn exp_weights_pass_hypotheses() {
        let h = check_hypotheses(&exp_scenario(&[4.0, 1.0], &[2.0, 2.0])).unwrap();
        assert_eq!(h.overall(), Status::Pass);
    }

    #[test]
    fn zero_weight_under_exp_is_domain_error() {
        let r = check_hypotheses(&exp_scenario(&[4.0, 0.0], &[2.0, 2.0]));
        assert!(matches!(r, Err(Error::Domain(_))));
    }

    #[test]
    fn equal_weights_pass_premise_and_stay_consistent() {
        let s = exp_scenario(&[2.0, 3.0], &[2.0, 3.0]);
        let r = verify_iid_theorem(&s).unwrap();
        assert_eq!(r.hypothesis.majorization_ok.status, Status::Pass);
        assert!(r.consistent);
        assert_eq!(r.verdict.relation, Relation::Inconclusive);
    }

    #[test]
    fn reversed_premise_is_precondition_error() {
        let s = exp_scenario(&[2.0, 2.0], &[4.0, 1.0]);
        assert!(matches!(verify(&s), Err(Error::Precondition(_))));
        assert!(matches!(run_scenario(&s), ScenarioOutcome::SkippedPrecondition { .. }));
    }

    #[test]
    fn iid_entry_point_rejects_chain() {
        let mut s = exp_scenario(&[4.0, 1.0], &[2.0, 2.0]);
        s.dists[1] = DistSpec::exponential(2.0).unwrap();
        assert!(matches!(verify_iid_theorem(&s), Err(Error::Parameter(_))));
    }

    #[test]
    fn exchange_check_orders_gamma_pair() {
        let d1 = DistSpec::gen_gamma(1.0, 2.0, 1.0).unwrap();
        let d2 = DistSpec::gen_gamma(1.0, 1.0, 1.0).unwrap();
        let c = WeightVector::new(vec![1.0, 4.0]).unwrap();
        let r = pairwise_exchange_check(&d1, &d2, &c, &Transform::power(-1.0).unwrap(), None).unwrap();
        assert!(r.holds);
        assert_eq!(r.weights, [1.0, 0.25]);
        let err = pairwise_exchange_check(&d2, &d1, &c, &Transform::power(-1.0).unwrap(), None);
        assert!(matches!(err, Err(Error::Precondition(_))));
    }

    #[test]
    fn exchange_check_trivial_cases() {
        let d = DistSpec::gen_gamma(1.0, 2.0, 1.0).unwrap();
        let c = WeightVector::new(vec![1.0, 3.0]).unwrap();
        let ts: Vec<f64> = (1..40).map(|i| i as f64 * 0.25).collect();
        assert!(pairwise_exchange_check(&d, &d, &c, &Transform::exp(), Some(&ts)).unwrap().holds);
        let d2 = DistSpec::gen_gamma(1.0, 1.0, 1.0).unwrap();
        let same = WeightVector::new(vec![2.0, 2.0]).unwrap();
        let r = pairwise_exchange_check(&d, &d2, &same, &Transform::exp(), Some(&ts)).unwrap();
        assert!(r.holds && r.max_violation == 0.0);
    }
}
