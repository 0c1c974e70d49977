//! Serializable views of core results and the report envelope.
//!
//! Every report is `{"tool", "version", "command", "config", "result"}`,
//! with the fully resolved configuration and no timestamps, so identical
//! inputs give byte-identical output.

use schurorder_core::distributions::{LcReport, LrReport, Method};
use schurorder_core::harness::{
    Check, CounterexampleReport, HypothesisReport, ScenarioOutcome, SuiteSummary, TheoremReport,
};
use schurorder_core::orders::OrderVerdict;
use schurorder_core::transforms::{ConditionCheck, ConditionReport};
use serde::Serialize;

use crate::format::{ScenarioFile, VariantRepr};
use crate::TOOL;

#[derive(Debug, Clone, Serialize)]
pub struct Envelope<'a, C: Serialize, R: Serialize> {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'a str,
    pub config: &'a C,
    pub result: R,
}

impl<'a, C: Serialize, R: Serialize> Envelope<'a, C, R> {
    pub fn new(command: &'a str, config: &'a C, result: R) -> Self {
        Self { tool: TOOL, version: schurorder_core::VERSION, command, config, result }
    }

    /// Pretty JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct VerdictOut {
    pub relation: &'static str,
    /// `sup (F_A - F_B)`
    pub max_pos_dev: f64,
    /// `sup (F_B - F_A)`
    pub max_neg_dev: f64,
    pub witness_pos: f64,
    pub witness_neg: f64,
    pub band: f64,
    pub crossing_count: Option<usize>,
}

impl From<&OrderVerdict> for VerdictOut {
    fn from(v: &OrderVerdict) -> Self {
        Self {
            relation: v.relation.name(),
            max_pos_dev: v.max_a_over_b,
            max_neg_dev: v.max_b_over_a,
            witness_pos: v.witness_a_over_b,
            witness_neg: v.witness_b_over_a,
            band: v.band,
            crossing_count: v.crossing_count,
        }
    }
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct CheckOut {
    pub status: &'static str,
    pub detail: String,
}

impl From<&Check> for CheckOut {
    fn from(c: &Check) -> Self {
        Self { status: c.status.name(), detail: c.detail.clone() }
    }
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct HypothesisOut {
    pub overall: &'static str,
    pub majorization_ok: CheckOut,
    pub conditions_ok: CheckOut,
    pub logconcavity_ok: CheckOut,
    pub lr_chain_ok: CheckOut,
}

impl From<&HypothesisReport> for HypothesisOut {
    fn from(h: &HypothesisReport) -> Self {
        Self {
            overall: h.overall().name(),
            majorization_ok: (&h.majorization_ok).into(),
            conditions_ok: (&h.conditions_ok).into(),
            logconcavity_ok: (&h.logconcavity_ok).into(),
            lr_chain_ok: (&h.lr_chain_ok).into(),
        }
    }
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct TheoremOut {
    pub scenario: String,
    pub predicted: &'static str,
    pub consistent: bool,
    pub hypothesis: HypothesisOut,
    /// Weights in the order they multiply `X₁, …, Xₙ`.
    pub arranged_a: Vec<f64>,
    pub arranged_b: Vec<f64>,
    pub mean_a: Option<f64>,
    pub mean_b: Option<f64>,
    pub verdict: VerdictOut,
    pub oracle_verdict: Option<VerdictOut>,
    pub oracle_note: Option<String>,
}

impl From<&TheoremReport> for TheoremOut {
    fn from(r: &TheoremReport) -> Self {
        Self {
            scenario: r.scenario.clone(),
            predicted: r.predicted.name(),
            consistent: r.consistent,
            hypothesis: (&r.hypothesis).into(),
            arranged_a: r.arranged_a.clone(),
            arranged_b: r.arranged_b.clone(),
            mean_a: r.mean_a,
            mean_b: r.mean_b,
            verdict: (&r.verdict).into(),
            oracle_verdict: r.oracle_verdict.as_ref().map(Into::into),
            oracle_note: r.oracle_note.clone(),
        }
    }
}

/// One scenario's outcome, tagged by `status`.
#[derive(Debug, Clone, Serialize, PartialEq)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum OutcomeOut {
    Verified {
        #[serde(flatten)]
        report: Box<TheoremOut>,
    },
    SkippedPrecondition {
        scenario: String,
        reason: String,
    },
    SkippedUnverified {
        scenario: String,
        reason: String,
    },
    Failed {
        scenario: String,
        error_kind: &'static str,
        error: String,
    },
}

impl From<&ScenarioOutcome> for OutcomeOut {
    fn from(o: &ScenarioOutcome) -> Self {
        match o {
            ScenarioOutcome::Verified(r) => OutcomeOut::Verified { report: Box::new(r.into()) },
            ScenarioOutcome::SkippedPrecondition { scenario, reason } => {
                OutcomeOut::SkippedPrecondition { scenario: scenario.clone(), reason: reason.clone() }
            }
            ScenarioOutcome::SkippedUnverified { scenario, reason } => {
                OutcomeOut::SkippedUnverified { scenario: scenario.clone(), reason: reason.clone() }
            }
            ScenarioOutcome::Failed { scenario, error } => OutcomeOut::Failed {
                scenario: scenario.clone(),
                error_kind: error.kind(),
                error: error.message().to_string(),
            },
        }
    }
}

/// A scenario together with its outcome, as written by `verify` and `suite`.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct ScenarioRecord {
    pub scenario: ScenarioFile,
    pub outcome: OutcomeOut,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct SummaryOut {
    pub total: usize,
    pub consistent: usize,
    pub inconsistent: usize,
    pub skipped_precondition: usize,
    pub skipped_unverified: usize,
    pub failed: usize,
    pub with_oracle: usize,
    pub inconsistent_names: Vec<String>,
}

impl From<&SuiteSummary> for SummaryOut {
    fn from(s: &SuiteSummary) -> Self {
        Self {
            total: s.total,
            consistent: s.consistent,
            inconsistent: s.inconsistent,
            skipped_precondition: s.skipped_precondition,
            skipped_unverified: s.skipped_unverified,
            failed: s.failed,
            with_oracle: s.with_oracle,
            inconsistent_names: s.inconsistent_names.clone(),
        }
    }
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct CounterexampleOut {
    pub alpha: f64,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub demonstrated: bool,
    pub crossing_count: usize,
    pub mean_a: f64,
    pub mean_b: f64,
    pub oracle_verdict: VerdictOut,
    pub verdict: Option<VerdictOut>,
}

impl From<&CounterexampleReport> for CounterexampleOut {
    fn from(r: &CounterexampleReport) -> Self {
        Self {
            alpha: r.alpha,
            a: r.a.clone(),
            b: r.b.clone(),
            demonstrated: r.demonstrated,
            crossing_count: r.crossings,
            mean_a: r.mean_a,
            mean_b: r.mean_b,
            oracle_verdict: (&r.oracle).into(),
            verdict: r.empirical.as_ref().map(Into::into),
        }
    }
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct ConditionOut {
    pub holds: bool,
    pub worst_violation: f64,
    pub worst_u: f64,
    pub worst_v: Option<f64>,
}

impl From<&ConditionCheck> for ConditionOut {
    fn from(c: &ConditionCheck) -> Self {
        Self { holds: c.holds, worst_violation: c.worst_violation, worst_u: c.worst_u, worst_v: c.worst_v }
    }
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct ConditionsOut {
    pub variant: VariantRepr,
    pub holds: bool,
    pub sign: ConditionOut,
    pub product: ConditionOut,
}

impl From<&ConditionReport> for ConditionsOut {
    fn from(r: &ConditionReport) -> Self {
        Self { variant: r.variant.into(), holds: r.holds(), sign: (&r.sign).into(), product: (&r.product).into() }
    }
}

fn method_name(m: Method) -> &'static str {
    match m {
        Method::Analytic => "analytic",
        Method::Numeric => "numeric",
    }
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct LcOut {
    pub status: &'static str,
    pub method: &'static str,
    pub witness: Option<f64>,
}

impl From<&LcReport> for LcOut {
    fn from(r: &LcReport) -> Self {
        Self { status: r.status.name(), method: method_name(r.method), witness: r.witness }
    }
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct LrOut {
    pub verdict: &'static str,
    pub method: &'static str,
    pub witness: Option<f64>,
}

impl From<&LrReport> for LrOut {
    fn from(r: &LrReport) -> Self {
        Self { verdict: r.verdict.name(), method: method_name(r.method), witness: r.witness }
    }
}
