use alloc::borrow::Cow;
use alloc::format;
use alloc::vec::Vec;

use super::{NumericCdf, OrderVerdict, Relation};
use crate::{Error, Result};

// Both cdfs on the union of their grids. Both are linear or constant
// between their own grid points, so extremes of the difference occur there.
fn aligned<'a>(fa: &'a NumericCdf, fb: &'a NumericCdf) -> (Cow<'a, [f64]>, Vec<f64>, Vec<f64>) {
    if fa.grid() == fb.grid() {
        return (Cow::Borrowed(fa.grid()), fa.values().to_vec(), fb.values().to_vec());
    }
    let mut xs: Vec<f64> = fa.grid().iter().chain(fb.grid()).copied().collect();
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    let va = xs.iter().map(|&x| fa.eval(x)).collect();
    let vb = xs.iter().map(|&x| fb.eval(x)).collect();
    (Cow::Owned(xs), va, vb)
}

fn check_tol(tol: f64) -> Result<()> {
    if tol >= 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(Error::Parameter(format!("tolerance must be finite and nonnegative, got {tol}")))
    }
}

/// Stochastic-order comparison of two numerically exact cdfs; differences
/// up to `tol` are ignored, and `tol` is reported as the band.
pub fn st_compare_exact(fa: &NumericCdf, fb: &NumericCdf, tol: f64) -> Result<OrderVerdict> {
    check_tol(tol)?;
    let (xs, va, vb) = aligned(fa, fb);
    let mut pos = (f64::NEG_INFINITY, xs[0]);
    let mut neg = pos;
    for ((&x, &a), &b) in xs.iter().zip(&va).zip(&vb) {
        let d = a - b;
        if d > pos.0 {
            pos = (d, x);
        }
        if -d > neg.0 {
            neg = (-d, x);
        }
    }
    Ok(OrderVerdict {
        relation: Relation::from_excess(pos.0, neg.0, tol),
        max_a_over_b: pos.0,
        max_b_over_a: neg.0,
        witness_a_over_b: pos.1,
        witness_b_over_a: neg.1,
        band: tol,
        crossing_count: Some(count_sign_changes(&va, &vb, tol)),
    })
}

/// Number of sign changes of `F_A - F_B`, skipping points where the two
/// agree within `tol`.
pub fn crossing_count(fa: &NumericCdf, fb: &NumericCdf, tol: f64) -> Result<usize> {
    check_tol(tol)?;
    let (_, va, vb) = aligned(fa, fb);
    Ok(count_sign_changes(&va, &vb, tol))
}

fn count_sign_changes(va: &[f64], vb: &[f64], tol: f64) -> usize {
    let mut last = 0i8;
    let mut count = 0;
    for (a, b) in va.iter().zip(vb) {
        let d = a - b;
        let s = if d > tol {
            1
        } else if d < -tol {
            -1
        } else {
            continue;
        };
        if last != 0 && s != last {
            count += 1;
        }
        last = s;
    }
    count
}
