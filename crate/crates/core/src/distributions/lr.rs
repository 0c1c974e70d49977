use alloc::format;
use alloc::vec::Vec;

use super::{Continuous, Family, Method};
use crate::math::{exp, ln, powf};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LrVerdict {
    /// `f₁ / f₂` is nondecreasing: `X₁ ≥_lr X₂`.
    D1Greater,
    /// `f₂ / f₁` is nondecreasing.
    D2Greater,
    NotOrdered,
    /// No sign change found numerically; order not proven.
    Unknown,
}

impl LrVerdict {
    pub fn name(self) -> &'static str {
        match self {
            LrVerdict::D1Greater => "D1_LR_GREATER",
            LrVerdict::D2Greater => "D2_LR_GREATER",
            LrVerdict::NotOrdered => "NOT_ORDERED",
            LrVerdict::Unknown => "UNKNOWN",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LrReport {
    pub verdict: LrVerdict,
    pub method: Method,
    /// A point where the log density ratio changes direction.
    pub witness: Option<f64>,
}

const GRID_POINTS: usize = 512;
const TAIL: f64 = 5e-4;

/// Likelihood-ratio comparison of two densities.
///
/// Two members of the generalized gamma family with the same `p` (or two
/// reciprocals with the same `p`) are decided exactly: the log ratio has
/// derivative `(A - B x^p) / x` with `A = (α₁ - α₂) p`, `B = (λ₁ - λ₂) p`.
/// Identical distributions report [`LrVerdict::D1Greater`]. Everything else
/// is scanned on a common grid and can only be refuted.
pub fn lr_compare<D1, D2>(d1: &D1, d2: &D2) -> Result<LrReport>
where
    D1: Continuous + ?Sized,
    D2: Continuous + ?Sized,
{
    match (d1.family(), d2.family()) {
        (
            Family::GeneralizedGamma { p: p1, alpha: a1, lambda: l1 },
            Family::GeneralizedGamma { p: p2, alpha: a2, lambda: l2 },
        ) if p1 == p2 => Ok(same_power_rule(p1, a1 - a2, l1 - l2, false)),
        (
            Family::InverseGeneralizedGamma { p: p1, alpha: a1, lambda: l1 },
            Family::InverseGeneralizedGamma { p: p2, alpha: a2, lambda: l2 },
        ) if p1 == p2 => Ok(same_power_rule(p1, a1 - a2, l1 - l2, true)),
        _ => numeric_scan(d1, d2),
    }
}

fn same_power_rule(p: f64, d_alpha: f64, d_lambda: f64, reciprocal: bool) -> LrReport {
    let (a, b) = (d_alpha * p, d_lambda * p);
    let (verdict, witness) = if a >= 0.0 && b <= 0.0 {
        (LrVerdict::D1Greater, None)
    } else if a <= 0.0 && b >= 0.0 {
        (LrVerdict::D2Greater, None)
    } else {
        (LrVerdict::NotOrdered, Some(powf(a / b, 1.0 / p)))
    };
    // X = 1/Y reverses the order and maps the turning point to its reciprocal.
    let (verdict, witness) = if reciprocal {
        let v = match verdict {
            LrVerdict::D1Greater if a == 0.0 && b == 0.0 => LrVerdict::D1Greater,
            LrVerdict::D1Greater => LrVerdict::D2Greater,
            LrVerdict::D2Greater => LrVerdict::D1Greater,
            other => other,
        };
        (v, witness.map(|w| 1.0 / w))
    } else {
        (verdict, witness)
    };
    LrReport { verdict, method: Method::Analytic, witness }
}

fn numeric_scan<D1, D2>(d1: &D1, d2: &D2) -> Result<LrReport>
where
    D1: Continuous + ?Sized,
    D2: Continuous + ?Sized,
{
    let lo = d1.quantile(TAIL).min(d2.quantile(TAIL));
    let hi = d1.upper_quantile(TAIL).max(d2.upper_quantile(TAIL));
    if !lo.is_finite() || !hi.is_finite() || !(lo < hi) {
        return Err(Error::Numeric(format!("cannot bracket {} and {}", d1.label(), d2.label())));
    }
    let xs: Vec<f64> = (0..GRID_POINTS)
        .map(|i| {
            let t = i as f64 / (GRID_POINTS - 1) as f64;
            if lo > 0.0 {
                exp(ln(lo) + t * (ln(hi) - ln(lo)))
            } else {
                lo + t * (hi - lo)
            }
        })
        .collect();
    let mut ratio = Vec::with_capacity(xs.len());
    for &x in &xs {
        let r = d1.ln_pdf(x) - d2.ln_pdf(x);
        if !r.is_finite() {
            return Err(Error::Numeric(format!("density ratio undefined at {x}")));
        }
        ratio.push(r);
    }
    let mut rise: Option<(f64, usize)> = None;
    let mut fall: Option<(f64, usize)> = None;
    for i in 0..ratio.len() - 1 {
        let step = ratio[i + 1] - ratio[i];
        let tol = 1e-9 * (1.0 + ratio[i].abs() + ratio[i + 1].abs());
        if step > tol && rise.is_none_or(|(s, _)| step > s) {
            rise = Some((step, i));
        }
        if -step > tol && fall.is_none_or(|(s, _)| -step > s) {
            fall = Some((-step, i));
        }
    }
    let (verdict, witness) = match (rise, fall) {
        (Some((_, i)), Some((_, j))) => {
            // Locate the first change of direction between the two extremes.
            let (from, to) = if i < j { (i, j) } else { (j, i) };
            let up = ratio[from + 1] > ratio[from];
            let k = (from..to).find(|&k| (ratio[k + 1] > ratio[k]) != up).unwrap_or(to);
            (LrVerdict::NotOrdered, Some(xs[k]))
        }
        _ => (LrVerdict::Unknown, None),
    };
    Ok(LrReport { verdict, method: Method::Numeric, witness })
}
