//! Float helpers for `no_std`, plus the special functions the distributions
//! need (log-gamma and the regularized incomplete gamma functions).

pub(crate) use libm::{ceil, exp, log as ln, pow as powf, sqrt};

pub(crate) const E: f64 = core::f64::consts::E;

pub(crate) fn ln_gamma(x: f64) -> f64 {
    libm::lgamma_r(x).0
}

const MAX_ITER: usize = 10_000;
const EPS: f64 = 1e-16;
const TINY: f64 = 1e-300;

/// Regularized lower incomplete gamma `P(a, x)`.
pub(crate) fn gamma_p(a: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x.is_infinite() {
        return 1.0;
    }
    if x < a + 1.0 {
        gamma_series(a, x)
    } else {
        1.0 - gamma_cont_frac(a, x)
    }
}

/// Regularized upper incomplete gamma `Q(a, x) = 1 - P(a, x)`, accurate in the
/// upper tail.
pub(crate) fn gamma_q(a: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    if x.is_infinite() {
        return 0.0;
    }
    if x < a + 1.0 {
        1.0 - gamma_series(a, x)
    } else {
        gamma_cont_frac(a, x)
    }
}

fn gamma_prefactor(a: f64, x: f64) -> f64 {
    exp(a * ln(x) - x - ln_gamma(a))
}

fn gamma_series(a: f64, x: f64) -> f64 {
    let mut ap = a;
    let mut del = 1.0 / a;
    let mut sum = del;
    for _ in 0..MAX_ITER {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if del.abs() < sum.abs() * EPS {
            break;
        }
    }
    (sum * gamma_prefactor(a, x)).min(1.0)
}

// Modified Lentz evaluation of the continued fraction for Q(a, x).
fn gamma_cont_frac(a: f64, x: f64) -> f64 {
    let mut b = x + 1.0 - a;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..MAX_ITER {
        let an = -(i as f64) * (i as f64 - a);
        b += 2.0;
        d = an * d + b;
        if d.abs() < TINY {
            d = TINY;
        }
        c = b + an / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < EPS {
            break;
        }
    }
    (gamma_prefactor(a, x) * h).clamp(0.0, 1.0)
}

/// Finds `x` in `[lo, hi]` with `f(x) = 0` for a monotone `f` by bisection.
/// The bracket is expanded geometrically upward while `f(hi)` has the same
/// sign as `f(lo)`.
pub(crate) fn bisect_monotone<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64) -> Option<f64> {
    let f_lo = f(lo);
    if f_lo == 0.0 {
        return Some(lo);
    }
    let sign_lo = f_lo > 0.0;
    let mut expansions = 0;
    while (f(hi) > 0.0) == sign_lo {
        lo = hi;
        hi = if hi > 0.0 { hi * 2.0 } else { hi.abs() + 1.0 };
        expansions += 1;
        if expansions > 2000 || !hi.is_finite() {
            return None;
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if (f(mid) > 0.0) == sign_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

/// `t` with `P(a, t) = u`, for `0 < u < 1`.
pub(crate) fn gamma_p_inv(a: f64, u: f64) -> f64 {
    if u >= 0.5 {
        return gamma_q_inv(a, 1.0 - u);
    }
    // P(a, t) ≤ t^a / Γ(a + 1), so this start is below the root.
    let lo = (ln(u) + ln_gamma(a + 1.0)) / a - 10.0;
    bisect_monotone(|s| gamma_p(a, exp(s)) - u, lo, lo + 1.0).map_or(f64::NAN, exp)
}

/// `t` with `Q(a, t) = tail`, for `0 < tail < 1`.
pub(crate) fn gamma_q_inv(a: f64, tail: f64) -> f64 {
    if tail > 0.5 {
        return gamma_p_inv(a, 1.0 - tail);
    }
    let lo = (ln(0.5) + ln_gamma(a + 1.0)) / a - 1.0;
    bisect_monotone(|s| gamma_q(a, exp(s)) - tail, lo, lo + 1.0).map_or(f64::NAN, exp)
}
