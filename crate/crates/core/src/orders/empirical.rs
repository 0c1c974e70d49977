use alloc::format;
use alloc::vec::Vec;

use super::{Interpolation, NumericCdf, OrderVerdict, Relation};
use crate::math::{ln, sqrt};
use crate::{Error, Result};

/// DKW half-width for `n` samples at confidence `1 - delta`.
pub fn dkw_epsilon(n: usize, delta: f64) -> f64 {
    sqrt(ln(2.0 / delta) / (2.0 * n as f64))
}

fn check_samples(name: &str, s: &[f64]) -> Result<()> {
    if s.is_empty() {
        return Err(Error::Parameter(format!("sample {name} is empty")));
    }
    if let Some(x) = s.iter().find(|x| !x.is_finite()) {
        return Err(Error::Parameter(format!("sample {name} contains {x}")));
    }
    Ok(())
}

fn sorted(s: &[f64]) -> Vec<f64> {
    let mut v = s.to_vec();
    v.sort_by(f64::total_cmp);
    v
}

/// Right-continuous empirical cdf; tied values share one grid point.
pub fn ecdf(samples: &[f64]) -> Result<NumericCdf> {
    check_samples("", samples)?;
    let v = sorted(samples);
    let n = v.len() as f64;
    let mut grid = Vec::new();
    let mut values = Vec::new();
    for (i, &x) in v.iter().enumerate() {
        if i + 1 < v.len() && v[i + 1] == x {
            continue;
        }
        grid.push(x);
        values.push((i + 1) as f64 / n);
    }
    NumericCdf::new(grid, values, None, Interpolation::Step, 0.0)
}

/// Compares two samples under the usual stochastic order.
///
/// Both empirical cdfs lie within their DKW bands with probability at least
/// `1 - delta` each, so an excess larger than `ε_A + ε_B` is evidence.
pub fn st_compare_empirical(a: &[f64], b: &[f64], delta: f64) -> Result<OrderVerdict> {
    check_samples("A", a)?;
    check_samples("B", b)?;
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::Parameter(format!("delta must lie in (0, 1), got {delta}")));
    }
    let (sa, sb) = (sorted(a), sorted(b));
    let (na, nb) = (sa.len() as f64, sb.len() as f64);
    let (mut i, mut j) = (0usize, 0usize);
    let mut pos = (f64::NEG_INFINITY, sa[0].min(sb[0]));
    let mut neg = pos;
    // Sweep merged sample points; the cdf difference only changes there.
    while i < sa.len() || j < sb.len() {
        let x = match (sa.get(i), sb.get(j)) {
            (Some(&u), Some(&v)) => u.min(v),
            (Some(&u), None) => u,
            (None, Some(&v)) => v,
            (None, None) => unreachable!(),
        };
        while i < sa.len() && sa[i] == x {
            i += 1;
        }
        while j < sb.len() && sb[j] == x {
            j += 1;
        }
        let d = i as f64 / na - j as f64 / nb;
        if d > pos.0 {
            pos = (d, x);
        }
        if -d > neg.0 {
            neg = (-d, x);
        }
    }
    let band = dkw_epsilon(sa.len(), delta) + dkw_epsilon(sb.len(), delta);
    Ok(OrderVerdict {
        relation: Relation::from_excess(pos.0, neg.0, band),
        max_a_over_b: pos.0,
        max_b_over_a: neg.0,
        witness_a_over_b: pos.1,
        witness_b_over_a: neg.1,
        band,
        crossing_count: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn ecdf_handles_ties() {
        let f = ecdf(&[2.0, 1.0, 2.0, 3.0]).unwrap();
        assert_eq!(f.grid(), &[1.0, 2.0, 3.0]);
        assert_eq!(f.values(), &[0.25, 0.75, 1.0]);
        assert_eq!(f.eval(1.99), 0.25);
    }

    #[test]
    fn shifted_samples_dominate() {
        let b: Vec<f64> = (0..1000).map(|i| i as f64 / 1000.0).collect();
        let a: Vec<f64> = b.iter().map(|x| x + 0.2).collect();
        let v = st_compare_empirical(&a, &b, 0.01).unwrap();
        assert_eq!(v.relation, Relation::ADominates);
        assert!((v.max_b_over_a - 0.2).abs() < 2e-3);
        assert_eq!(v.max_a_over_b, 0.0);
        let w = st_compare_empirical(&b, &a, 0.01).unwrap();
        assert_eq!(w.relation, Relation::BDominates);
    }

    #[test]
    fn identical_samples_inconclusive() {
        let a = vec![1.0, 2.0, 3.0];
        let v = st_compare_empirical(&a, &a, 0.05).unwrap();
        assert_eq!(v.relation, Relation::Inconclusive);
        assert_eq!(v.max_a_over_b, 0.0);
    }

    #[test]
    fn spread_samples_cross() {
        let b: Vec<f64> = (0..2000).map(|i| 0.4 + 0.2 * i as f64 / 2000.0).collect();
        let a: Vec<f64> = (0..2000).map(|i| i as f64 / 2000.0).collect();
        assert_eq!(st_compare_empirical(&a, &b, 0.01).unwrap().relation, Relation::Crossing);
    }

    #[test]
    fn input_errors() {
        assert!(matches!(st_compare_empirical(&[], &[1.0], 0.1), Err(Error::Parameter(_))));
        assert!(matches!(ecdf(&[]), Err(Error::Parameter(_))));
        assert!(matches!(st_compare_empirical(&[1.0], &[1.0], 1.0), Err(Error::Parameter(_))));
        assert!(matches!(st_compare_empirical(&[f64::NAN], &[1.0], 0.1), Err(Error::Parameter(_))));
    }
}
