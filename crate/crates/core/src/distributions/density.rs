use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use core::fmt;

use super::{exp_or_zero, Continuous, Family};
use crate::math::ln;
use crate::quad::integrate;
use crate::transforms::Transform;
use crate::{Error, Result};

type LnPdf = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A density given by a closure, normalized to within `1e-6` at
/// construction. Cdf, quantiles and means come from adaptive quadrature.
#[derive(Clone)]
pub struct DensitySpec {
    ln_pdf: LnPdf,
    support: (f64, f64),
    label: String,
}

impl fmt::Debug for DensitySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DensitySpec").field("label", &self.label).field("support", &self.support).finish()
    }
}

const NORMALIZATION_TOL: f64 = 1e-6;
const QUAD_ABS: f64 = 1e-12;
const QUAD_REL: f64 = 1e-10;

impl DensitySpec {
    pub fn from_pdf<F>(label: &str, pdf: F, support: (f64, f64)) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self::from_ln_pdf(label, move |x| ln(pdf(x)), support)
    }

    pub fn from_ln_pdf<F>(label: &str, ln_pdf: F, support: (f64, f64)) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        let (lo, hi) = support;
        if !(lo < hi) {
            return Err(Error::Parameter(format!("empty support ({lo}, {hi})")));
        }
        let d = Self { ln_pdf: Arc::new(ln_pdf), support, label: label.to_string() };
        let total = integrate(|x| d.pdf(x), lo, hi, QUAD_ABS, QUAD_REL)?.value;
        if (total - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::Parameter(format!("density {label} integrates to {total}, not 1")));
        }
        Ok(d)
    }
}

impl Continuous for DensitySpec {
    fn pdf(&self, x: f64) -> f64 {
        exp_or_zero(self.ln_pdf(x))
    }

    fn ln_pdf(&self, x: f64) -> f64 {
        let (lo, hi) = self.support;
        if !(x > lo && x < hi) {
            return f64::NEG_INFINITY;
        }
        let v = (self.ln_pdf)(x);
        if v.is_nan() {
            f64::NEG_INFINITY
        } else {
            v
        }
    }

    fn cdf(&self, x: f64) -> f64 {
        let (lo, hi) = self.support;
        if x <= lo {
            return 0.0;
        }
        if x >= hi {
            return 1.0;
        }
        integrate(|t| self.pdf(t), lo, x, QUAD_ABS, QUAD_REL).map_or(f64::NAN, |q| q.value.clamp(0.0, 1.0))
    }

    fn sf(&self, x: f64) -> f64 {
        let (lo, hi) = self.support;
        if x <= lo {
            return 1.0;
        }
        if x >= hi {
            return 0.0;
        }
        integrate(|t| self.pdf(t), x, hi, QUAD_ABS, QUAD_REL).map_or(f64::NAN, |q| q.value.clamp(0.0, 1.0))
    }

    fn support(&self) -> (f64, f64) {
        self.support
    }

    fn mean(&self) -> Option<f64> {
        let (lo, hi) = self.support;
        integrate(|t| t * self.pdf(t), lo, hi, QUAD_ABS, QUAD_REL).ok().map(|q| q.value).filter(|m| m.is_finite())
    }

    fn family(&self) -> Family {
        Family::Other
    }

    fn label(&self) -> String {
        self.label.clone()
    }

    fn cell_mass(&self, lo: f64, hi: f64) -> f64 {
        integrate(|t| self.pdf(t), lo, hi, QUAD_ABS, QUAD_REL).map_or(0.0, |q| q.value.max(0.0))
    }
}

/// Density of `Y = psi⁻¹(X)`: `f_Y(y) = f_X(psi(y)) |psi'(y)|`, on the
/// preimage of the support of `X`.
pub fn transformed_density<D>(d: &D, psi: &Transform) -> Result<DensitySpec>
where
    D: Continuous + Clone + 'static,
{
    let (lo, hi) = d.support();
    let support = psi.preimage(lo, hi);
    let x = d.clone();
    let t = psi.clone();
    let label = format!("{}⁻¹({})", psi.label(), d.label());
    DensitySpec::from_ln_pdf(&label, move |y| x.ln_pdf(t.eval(y)) + ln(t.d1(y).abs()), support)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::GeneralizedGamma;
    use crate::math::exp;

    #[test]
    fn unnormalized_density_rejected() {
        assert!(DensitySpec::from_pdf("twice", |x| 2.0 * exp(-x), (0.0, f64::INFINITY)).is_err());
    }

    #[test]
    fn closure_exponential_matches() {
        let d = DensitySpec::from_pdf("exp", |x| exp(-x), (0.0, f64::INFINITY)).unwrap();
        assert!((d.cdf(1.0) - (1.0 - exp(-1.0))).abs() < 1e-10);
        assert!((d.mean().unwrap() - 1.0).abs() < 1e-9);
        assert!((d.quantile(0.5) - core::f64::consts::LN_2).abs() < 1e-9);
    }

    #[test]
    fn log_of_gamma_via_exp() {
        // psi = exp, so Y = log X; for exp(1), P(Y ≤ 0) = 1 - e⁻¹.
        let x = GeneralizedGamma::new(1.0, 1.0, 1.0).unwrap();
        let y = transformed_density(&x, &Transform::exp()).unwrap();
        assert_eq!(y.support(), (f64::NEG_INFINITY, f64::INFINITY));
        assert!((y.cdf(0.0) - (1.0 - exp(-1.0))).abs() < 1e-9);
    }

    #[test]
    fn square_root_power_transform() {
        // psi(y) = y^{1/2}, so Y = X²; for exp(1), P(Y ≤ 4) = 1 - e⁻².
        let x = GeneralizedGamma::new(1.0, 1.0, 1.0).unwrap();
        let y = transformed_density(&x, &Transform::power(0.5).unwrap()).unwrap();
        assert!((y.cdf(4.0) - (1.0 - exp(-2.0))).abs() < 1e-9);
    }
}
