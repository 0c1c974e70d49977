use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand_distr::{Distribution, Gamma};

use super::{exp_or_zero, Continuous, Family};
use crate::math::{exp, gamma_p, gamma_p_inv, gamma_q, gamma_q_inv, ln, ln_gamma, powf};
use crate::rng::Rng;
use crate::{Error, Result};

/// Generalized gamma on `(0, ∞)` with density
/// `p λ^α / Γ(α) · x^{αp-1} e^{-λ x^p}`. `X^p` is gamma with shape `α` and
/// rate `λ`, which gives the cdf, quantiles and the sampler.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneralizedGamma {
    p: f64,
    alpha: f64,
    lambda: f64,
    ln_norm: f64,
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::Parameter(format!("{name} must be positive and finite, got {v}")))
    }
}

impl GeneralizedGamma {
    pub fn new(p: f64, alpha: f64, lambda: f64) -> Result<Self> {
        check_positive("p", p)?;
        check_positive("alpha", alpha)?;
        check_positive("lambda", lambda)?;
        Ok(Self { p, alpha, lambda, ln_norm: ln(p) + alpha * ln(lambda) - ln_gamma(alpha) })
    }

    /// Gamma with shape `alpha` and rate `lambda` (`p = 1`).
    pub fn gamma(alpha: f64, lambda: f64) -> Result<Self> {
        Self::new(1.0, alpha, lambda)
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// `E[X^k]` for `k > -αp`.
    pub fn raw_moment(&self, k: f64) -> Option<f64> {
        let s = self.alpha + k / self.p;
        (s > 0.0).then(|| exp(ln_gamma(s) - ln_gamma(self.alpha) - k / self.p * ln(self.lambda)))
    }
}

impl Continuous for GeneralizedGamma {
    fn pdf(&self, x: f64) -> f64 {
        exp_or_zero(self.ln_pdf(x))
    }

    fn ln_pdf(&self, x: f64) -> f64 {
        if !(x > 0.0) || x == f64::INFINITY {
            return f64::NEG_INFINITY;
        }
        let lx = ln(x);
        self.ln_norm + (self.alpha * self.p - 1.0) * lx - self.lambda * exp(self.p * lx)
    }

    fn cdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            0.0
        } else {
            gamma_p(self.alpha, self.lambda * powf(x, self.p))
        }
    }

    fn sf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            1.0
        } else {
            gamma_q(self.alpha, self.lambda * powf(x, self.p))
        }
    }

    fn support(&self) -> (f64, f64) {
        (0.0, f64::INFINITY)
    }

    fn quantile(&self, u: f64) -> f64 {
        if u <= 0.0 {
            return 0.0;
        }
        if u >= 1.0 {
            return f64::INFINITY;
        }
        powf(gamma_p_inv(self.alpha, u) / self.lambda, 1.0 / self.p)
    }

    fn upper_quantile(&self, tail: f64) -> f64 {
        if tail <= 0.0 {
            return f64::INFINITY;
        }
        if tail >= 1.0 {
            return 0.0;
        }
        powf(gamma_q_inv(self.alpha, tail) / self.lambda, 1.0 / self.p)
    }

    fn mean(&self) -> Option<f64> {
        self.raw_moment(1.0)
    }

    fn family(&self) -> Family {
        Family::GeneralizedGamma { p: self.p, alpha: self.alpha, lambda: self.lambda }
    }

    fn label(&self) -> String {
        format!("gengamma(p={}, alpha={}, lambda={})", self.p, self.alpha, self.lambda)
    }

    fn sample(&self, rng: &mut Rng) -> f64 {
        let g = Gamma::new(self.alpha, 1.0 / self.lambda).expect("validated parameters");
        let y: f64 = g.sample(rng);
        if self.p == 1.0 {
            y
        } else {
            powf(y, 1.0 / self.p)
        }
    }
}

/// `X = 1 / Y` with `Y` generalized gamma; density on `(0, ∞)`
/// `p λ^α / Γ(α) · x^{-αp-1} e^{-λ x^{-p}}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InverseGeneralizedGamma {
    base: GeneralizedGamma,
}

impl InverseGeneralizedGamma {
    pub fn new(p: f64, alpha: f64, lambda: f64) -> Result<Self> {
        Ok(Self { base: GeneralizedGamma::new(p, alpha, lambda)? })
    }

    /// The distribution of `1 / X`.
    pub fn reciprocal(&self) -> &GeneralizedGamma {
        &self.base
    }
}

impl Continuous for InverseGeneralizedGamma {
    fn pdf(&self, x: f64) -> f64 {
        exp_or_zero(self.ln_pdf(x))
    }

    fn ln_pdf(&self, x: f64) -> f64 {
        if !(x > 0.0) || x == f64::INFINITY {
            return f64::NEG_INFINITY;
        }
        self.base.ln_pdf(1.0 / x) - 2.0 * ln(x)
    }

    fn cdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            0.0
        } else {
            self.base.sf(1.0 / x)
        }
    }

    fn sf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            1.0
        } else {
            self.base.cdf(1.0 / x)
        }
    }

    fn support(&self) -> (f64, f64) {
        (0.0, f64::INFINITY)
    }

    fn quantile(&self, u: f64) -> f64 {
        1.0 / self.base.upper_quantile(u)
    }

    fn upper_quantile(&self, tail: f64) -> f64 {
        1.0 / self.base.quantile(tail)
    }

    fn mean(&self) -> Option<f64> {
        self.base.raw_moment(-1.0)
    }

    fn family(&self) -> Family {
        let b = &self.base;
        Family::InverseGeneralizedGamma { p: b.p, alpha: b.alpha, lambda: b.lambda }
    }

    fn label(&self) -> String {
        format!("invgengamma(p={}, alpha={}, lambda={})", self.base.p, self.base.alpha, self.base.lambda)
    }

    fn sample(&self, rng: &mut Rng) -> f64 {
        1.0 / self.base.sample(rng)
    }
}

/// The distributions a scenario may name.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DistSpec {
    GenGamma(GeneralizedGamma),
    InvGenGamma(InverseGeneralizedGamma),
}

impl DistSpec {
    pub fn gen_gamma(p: f64, alpha: f64, lambda: f64) -> Result<Self> {
        GeneralizedGamma::new(p, alpha, lambda).map(DistSpec::GenGamma)
    }

    pub fn inv_gen_gamma(p: f64, alpha: f64, lambda: f64) -> Result<Self> {
        InverseGeneralizedGamma::new(p, alpha, lambda).map(DistSpec::InvGenGamma)
    }

    pub fn exponential(rate: f64) -> Result<Self> {
        Self::gen_gamma(1.0, 1.0, rate)
    }

    fn inner(&self) -> &dyn Continuous {
        match self {
            DistSpec::GenGamma(d) => d,
            DistSpec::InvGenGamma(d) => d,
        }
    }
}

impl Continuous for DistSpec {
    fn pdf(&self, x: f64) -> f64 {
        self.inner().pdf(x)
    }
    fn ln_pdf(&self, x: f64) -> f64 {
        self.inner().ln_pdf(x)
    }
    fn cdf(&self, x: f64) -> f64 {
        self.inner().cdf(x)
    }
    fn sf(&self, x: f64) -> f64 {
        self.inner().sf(x)
    }
    fn support(&self) -> (f64, f64) {
        self.inner().support()
    }
    fn quantile(&self, u: f64) -> f64 {
        self.inner().quantile(u)
    }
    fn upper_quantile(&self, tail: f64) -> f64 {
        self.inner().upper_quantile(tail)
    }
    fn mean(&self) -> Option<f64> {
        self.inner().mean()
    }
    fn family(&self) -> Family {
        self.inner().family()
    }
    fn label(&self) -> String {
        self.inner().label()
    }
    fn cell_mass(&self, lo: f64, hi: f64) -> f64 {
        self.inner().cell_mass(lo, hi)
    }
    fn sample(&self, rng: &mut Rng) -> f64 {
        match self {
            DistSpec::GenGamma(d) => d.sample(rng),
            DistSpec::InvGenGamma(d) => d.sample(rng),
        }
    }
}

/// Density at a point of the open support; `x ≤ 0` is a domain error.
pub fn density(d: &GeneralizedGamma, x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("density needs finite x > 0, got {x}")));
    }
    Ok(d.pdf(x))
}

/// `n` independent draws, deterministic in `seed`.
pub fn sample(d: &GeneralizedGamma, n: usize, seed: u64) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::Parameter("sample size must be at least 1".into()));
    }
    let mut rng = crate::rng::from_seed(seed);
    Ok((0..n).map(|_| d.sample(&mut rng)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::integrate;

    #[test]
    fn density_points_and_domain() {
        let e = GeneralizedGamma::new(1.0, 1.0, 1.0).unwrap();
        assert!((density(&e, 0.5).unwrap() - exp(-0.5)).abs() < 1e-15);
        let w = GeneralizedGamma::new(2.0, 1.0, 1.0).unwrap();
        assert!((density(&w, 1.0).unwrap() - 2.0 * exp(-1.0)).abs() < 1e-15);
        assert!(matches!(density(&w, 0.0), Err(Error::Domain(_))));
        assert!(matches!(density(&w, -1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn sample_is_deterministic_and_rejects_empty() {
        let d = GeneralizedGamma::new(1.0, 2.0, 1.0).unwrap();
        assert_eq!(sample(&d, 100, 7).unwrap(), sample(&d, 100, 7).unwrap());
        assert_ne!(sample(&d, 100, 7).unwrap(), sample(&d, 100, 8).unwrap());
        assert!(matches!(sample(&d, 0, 7), Err(Error::Parameter(_))));
        let xs = sample(&d, 1_000_000, 1).unwrap();
        let mean = xs.iter().sum::<f64>() / xs.len() as f64;
        assert!((mean - 2.0).abs() < 0.01, "{mean}");
    }

    #[test]
    fn exponential_closed_forms() {
        let d = GeneralizedGamma::new(1.0, 1.0, 2.0).unwrap();
        assert!((d.cdf(0.7) - (1.0 - exp(-1.4))).abs() < 1e-14);
        assert!((d.mean().unwrap() - 0.5).abs() < 1e-14);
        assert!((d.quantile(0.5) - core::f64::consts::LN_2 / 2.0).abs() < 1e-12);
        assert!((d.upper_quantile(1e-20) - 20.0 * core::f64::consts::LN_10 / 2.0).abs() < 1e-9);
    }

    #[test]
    fn weibull_mean() {
        // p = 2, α = 1: Rayleigh-type with mean Γ(1.5) / sqrt(λ).
        let d = GeneralizedGamma::new(2.0, 1.0, 1.0).unwrap();
        assert!((d.mean().unwrap() - 0.886_226_925_452_758).abs() < 1e-12);
    }

    #[test]
    fn densities_integrate_to_one_and_match_cdf() {
        let ds = [
            DistSpec::gen_gamma(0.5, 3.0, 1.5).unwrap(),
            DistSpec::gen_gamma(3.0, 0.7, 0.4).unwrap(),
            DistSpec::inv_gen_gamma(2.0, 3.0, 1.0).unwrap(),
            DistSpec::inv_gen_gamma(0.7, 4.0, 2.0).unwrap(),
        ];
        for d in ds {
            let total = integrate(|x| d.pdf(x), 0.0, f64::INFINITY, 1e-12, 1e-10).unwrap().value;
            assert!((total - 1.0).abs() < 1e-8, "{}: {total}", d.label());
            let x = d.quantile(0.3);
            let part = integrate(|t| d.pdf(t), 0.0, x, 1e-13, 1e-11).unwrap().value;
            assert!((part - 0.3).abs() < 1e-8, "{}: {part}", d.label());
            assert!((d.cdf(x) + d.sf(x) - 1.0).abs() < 1e-14);
            if let Some(m) = d.mean() {
                let q = integrate(|t| t * d.pdf(t), 0.0, f64::INFINITY, 1e-12, 1e-10).unwrap().value;
                assert!((q - m).abs() < 1e-7 * m, "{}: {q} vs {m}", d.label());
            }
        }
    }

    #[test]
    fn invalid_parameters() {
        assert!(GeneralizedGamma::new(0.0, 1.0, 1.0).is_err());
        assert!(GeneralizedGamma::new(1.0, -1.0, 1.0).is_err());
        assert!(InverseGeneralizedGamma::new(1.0, 1.0, f64::NAN).is_err());
    }

    #[test]
    fn inverse_mean_infinite_for_heavy_tail() {
        let d = InverseGeneralizedGamma::new(1.0, 0.5, 1.0).unwrap();
        assert_eq!(d.mean(), None);
        let d = InverseGeneralizedGamma::new(1.0, 3.0, 2.0).unwrap();
        assert!((d.mean().unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn sample_mean_is_close() {
        let d = DistSpec::gen_gamma(2.0, 1.5, 0.8).unwrap();
        let mut rng = crate::rng::from_seed(7);
        let n = 200_000;
        let m: f64 = (0..n).map(|_| d.sample(&mut rng)).sum::<f64>() / n as f64;
        assert!((m - d.mean().unwrap()).abs() < 0.01, "{m}");
    }
}
