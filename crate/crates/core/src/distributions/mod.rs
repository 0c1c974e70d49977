//! Continuous distributions on the positive half-line: the generalized gamma
//! family and its reciprocal, densities given by closures, change of
//! variables, log-concavity and likelihood-ratio comparisons.

use alloc::string::String;

use crate::math::{bisect_monotone, exp, ln};
use crate::rng::Rng;
use rand::Rng as _;

mod density;
mod gengamma;
mod logconcave;
mod lr;

pub use density::{transformed_density, DensitySpec};
pub use gengamma::{density, sample, DistSpec, GeneralizedGamma, InverseGeneralizedGamma};
pub use logconcave::{log_concavity_classify, power_map_log_density, LcReport, LcStatus, Method, PowerMap};
pub use lr::{lr_compare, LrReport, LrVerdict};

/// Parametric identity of a distribution, used to pick analytic rules.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Family {
    /// density `p λ^α / Γ(α) · x^{αp-1} e^{-λ x^p}` on `(0, ∞)`
    GeneralizedGamma { p: f64, alpha: f64, lambda: f64 },
    /// `1 / Y` with `Y` generalized gamma
    InverseGeneralizedGamma { p: f64, alpha: f64, lambda: f64 },
    /// anything without closed-form rules
    Other,
}

/// A univariate continuous distribution.
pub trait Continuous: Send + Sync {
    fn pdf(&self, x: f64) -> f64;

    fn ln_pdf(&self, x: f64) -> f64 {
        ln(self.pdf(x))
    }

    fn cdf(&self, x: f64) -> f64;

    /// `1 - cdf(x)`; implementors should keep relative accuracy in the tail.
    fn sf(&self, x: f64) -> f64 {
        1.0 - self.cdf(x)
    }

    /// Closure of the support, possibly with infinite endpoints.
    fn support(&self) -> (f64, f64);

    /// Smallest `x` with `cdf(x) ≥ u`, for `0 < u < 1`.
    fn quantile(&self, u: f64) -> f64 {
        let (lo, hi) = self.support();
        let a = if lo.is_finite() {
            lo
        } else {
            let mut a = -1.0;
            while self.cdf(a) >= u && a > -1e300 {
                a *= 2.0;
            }
            a
        };
        let b = if hi.is_finite() { hi } else { a.abs() + 1.0 };
        bisect_monotone(|x| self.cdf(x) - u, a, b).unwrap_or(f64::NAN)
    }

    /// `x` with `sf(x) = tail`.
    fn upper_quantile(&self, tail: f64) -> f64 {
        self.quantile(1.0 - tail)
    }

    /// `None` when the mean is infinite.
    fn mean(&self) -> Option<f64>;

    fn family(&self) -> Family {
        Family::Other
    }

    fn label(&self) -> String;

    /// `P(lo < X ≤ hi)`, taken from whichever tail keeps precision.
    fn cell_mass(&self, lo: f64, hi: f64) -> f64 {
        let (cl, ch) = (self.cdf(lo), self.cdf(hi));
        if cl > 0.5 {
            (self.sf(lo) - self.sf(hi)).max(0.0)
        } else {
            (ch - cl).max(0.0)
        }
    }

    /// One draw; the default inverts the cdf.
    fn sample(&self, rng: &mut Rng) -> f64 {
        let u: f64 = rng.random();
        self.quantile(u.clamp(1e-300, 1.0 - 1e-16))
    }
}

// Numerically safe `exp` of a log-density.
pub(crate) fn exp_or_zero(v: f64) -> f64 {
    if v == f64::NEG_INFINITY {
        0.0
    } else {
        exp(v)
    }
}
