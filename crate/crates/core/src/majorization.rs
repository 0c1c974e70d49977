//! Majorization and weak majorization of real vectors, constructive
//! T-transform chains, and weak-majorization completions.
//!
//! Throughout, `x ⪯ y` reads "x is majorized by y" in the chosen mode, with
//! `x₍₁₎ ≤ … ≤ x₍ₙ₎` the increasing arrangement of `x`:
//!
//! - [`MajorizationMode::Full`]: equal totals and
//!   `Σ_{i≤j} x₍ᵢ₎ ≥ Σ_{i≤j} y₍ᵢ₎` for `j < n`;
//! - [`MajorizationMode::WeakSup`] (`x ⪯^w y`): the same bottom partial sums
//!   for every `j ≤ n`, no total equality;
//! - [`MajorizationMode::WeakSub`] (`x ⪯_w y`): top partial sums
//!   `Σ_{i≥j} x₍ᵢ₎ ≤ Σ_{i≥j} y₍ᵢ₎` for every `j`.

use alloc::format;
use alloc::vec::Vec;
use core::fmt;

use crate::{Error, Result};

/// Default relative slack for partial-sum comparisons.
pub const DEFAULT_TOL: f64 = 1e-12;

/// A finite, nonempty vector of real coefficients.
///
/// Nonnegativity is not part of the type: transformed coefficients such as
/// `log aᵢ` may be negative. Operations that need it check it themselves.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector(Vec<f64>);

impl WeightVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Dimension("weight vector must have at least one entry".into()));
        }
        if let Some((i, v)) = values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::Parameter(format!("weight entry {i} is not finite ({v})")));
        }
        Ok(Self(values))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn sum(&self) -> f64 {
        self.0.iter().sum()
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    /// Applies `f` entrywise; fails if any image is not finite.
    pub fn map<F: Fn(f64) -> f64>(&self, f: F) -> Result<Self> {
        let out: Vec<f64> = self.0.iter().map(|&v| f(v)).collect();
        if let Some((i, v)) = out.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::Domain(format!("entry {i} ({}) maps to a non-finite value ({v})", self.0[i])));
        }
        Ok(Self(out))
    }

    pub fn try_map<F: Fn(f64) -> Result<f64>>(&self, f: F) -> Result<Self> {
        let out = self.0.iter().map(|&v| f(v)).collect::<Result<Vec<f64>>>()?;
        Self::new(out)
    }

    pub fn require_nonnegative(&self, what: &str) -> Result<()> {
        match self.0.iter().position(|&v| v < 0.0) {
            Some(i) => Err(Error::Parameter(format!("{what}: entry {i} is negative ({})", self.0[i]))),
            None => Ok(()),
        }
    }

    pub fn sorted_increasing(&self) -> Self {
        let mut v = self.0.clone();
        v.sort_by(f64::total_cmp);
        Self(v)
    }
}

impl fmt::Display for WeightVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str(")")
    }
}

/// Increasing arrangement; stable with respect to ties.
pub fn sort_increasing(v: &WeightVector) -> WeightVector {
    v.sorted_increasing()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MajorizationMode {
    Full,
    WeakSub,
    WeakSup,
}

impl MajorizationMode {
    pub fn name(self) -> &'static str {
        match self {
            MajorizationMode::Full => "m",
            MajorizationMode::WeakSub => "sub",
            MajorizationMode::WeakSup => "sup",
        }
    }
}

impl fmt::Display for MajorizationMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

fn require_same_len(x: &WeightVector, y: &WeightVector) -> Result<()> {
    if x.len() != y.len() {
        return Err(Error::Dimension(format!("vectors have lengths {} and {}", x.len(), y.len())));
    }
    Ok(())
}

fn slack(tol: f64, a: f64, b: f64) -> f64 {
    tol * (1.0 + a.abs().max(b.abs()))
}

/// Decides `x ⪯ y` in `mode`. Each sum comparison is slackened by
/// `tol · (1 + |sum|)`.
pub fn check_majorize(x: &WeightVector, y: &WeightVector, mode: MajorizationMode, tol: f64) -> Result<bool> {
    require_same_len(x, y)?;
    if !(tol >= 0.0) {
        return Err(Error::Parameter(format!("tolerance must be nonnegative, got {tol}")));
    }
    let xs = x.sorted_increasing();
    let ys = y.sorted_increasing();
    let (xs, ys) = (xs.values(), ys.values());
    let n = xs.len();

    let bottom_sums_dominate = |upto: usize| {
        let (mut sx, mut sy) = (0.0, 0.0);
        (0..upto).all(|j| {
            sx += xs[j];
            sy += ys[j];
            sx >= sy - slack(tol, sx, sy)
        })
    };

    Ok(match mode {
        MajorizationMode::Full => {
            let (tx, ty) = (x.sum(), y.sum());
            (tx - ty).abs() <= slack(tol, tx, ty) && bottom_sums_dominate(n - 1)
        }
        MajorizationMode::WeakSup => bottom_sums_dominate(n),
        MajorizationMode::WeakSub => {
            let (mut sx, mut sy) = (0.0, 0.0);
            (0..n).rev().all(|j| {
                sx += xs[j];
                sy += ys[j];
                sx <= sy + slack(tol, sx, sy)
            })
        }
    })
}

/// A chain of vectors from the increasing arrangement of a majorized vector
/// to that of its majorizing vector, consecutive steps differing in at most
/// two coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct TChain {
    steps: Vec<WeightVector>,
}

impl TChain {
    pub fn steps(&self) -> &[WeightVector] {
        &self.steps
    }

    /// Number of T-transforms applied (one less than the number of steps).
    pub fn transforms(&self) -> usize {
        self.steps.len() - 1
    }
}

/// Builds the T-transform chain from `sort_increasing(x)` to
/// `sort_increasing(y)` for `x ⪯_m y`.
///
/// Works on decreasing arrangements: starting from `y`, take the largest
/// index `j` with `y_j > x_j` and the smallest `k > j` with `y_k < x_k`, and
/// move `min(y_j - x_j, x_k - y_k)` from coordinate `j` to coordinate `k`.
/// Each transfer fixes at least one more coordinate, so at most `n - 1`
/// transfers are needed.
pub fn t_transform_chain(x: &WeightVector, y: &WeightVector) -> Result<TChain> {
    if !check_majorize(x, y, MajorizationMode::Full, DEFAULT_TOL)? {
        return Err(Error::Order(format!("{x} is not majorized by {y}")));
    }
    let n = x.len();
    let mut target = x.sorted_increasing().into_vec();
    target.reverse();
    let mut cur = y.sorted_increasing().into_vec();
    cur.reverse();

    let scale = 1.0 + cur.iter().chain(&target).fold(0.0f64, |m, v| m.max(v.abs()));
    let snap = 1e-10 * scale * n as f64;

    let mut desc = alloc::vec![cur.clone()];
    loop {
        for (c, t) in cur.iter_mut().zip(&target) {
            if (*c - *t).abs() <= snap {
                *c = *t;
            }
        }
        if cur == target {
            if desc.last() != Some(&cur) {
                // Only snapping moved us; fold it into the last recorded step.
                *desc.last_mut().expect("chain is nonempty") = cur.clone();
            }
            break;
        }
        if desc.len() > n {
            return Err(Error::Internal(format!("T-transform chain exceeded {n} steps for {x} and {y}")));
        }
        let j = (0..n).rev().find(|&i| cur[i] > target[i]);
        let k = j.and_then(|j| (j + 1..n).find(|&i| cur[i] < target[i]));
        let (j, k) = match (j, k) {
            (Some(j), Some(k)) => (j, k),
            _ => return Err(Error::Internal(format!("no transferable pair while reducing {y} toward {x}"))),
        };
        let give = cur[j] - target[j];
        let need = target[k] - cur[k];
        if give <= need {
            cur[k] += give;
            cur[j] = target[j];
        } else {
            cur[j] -= need;
            cur[k] = target[k];
        }
        desc.push(cur.clone());
    }

    let mut steps: Vec<WeightVector> = desc
        .into_iter()
        .rev()
        .map(|mut v| {
            v.reverse();
            WeightVector(v)
        })
        .collect();
    // Endpoints are the exact arrangements, not their snapped images.
    if let Some(first) = steps.first_mut() {
        *first = x.sorted_increasing();
    }
    let ys = y.sorted_increasing();
    if steps.len() > 1 {
        *steps.last_mut().expect("nonempty") = ys;
    } else if steps[0] != ys {
        // Equal within tolerance; keep both arrangements as the endpoints.
        steps.push(ys);
    }
    Ok(TChain { steps })
}

/// Finds `c` sandwiched between `u` and a vector majorizing `v`:
///
/// - `WeakSub` (requires `v ⪯_w u`): `c ≤ u` componentwise and `v ⪯_m c`;
/// - `WeakSup` (requires `v ⪯^w u`): `c ≥ u` componentwise and `v ⪯_m c`.
///
/// Both postconditions are checked before returning.
pub fn weak_completion(u: &WeightVector, v: &WeightVector, mode: MajorizationMode) -> Result<WeightVector> {
    require_same_len(u, v)?;
    match mode {
        MajorizationMode::Full => Err(Error::Parameter("weak completion needs a weak mode (sub or sup)".into())),
        MajorizationMode::WeakSub => {
            if !check_majorize(v, u, MajorizationMode::WeakSub, DEFAULT_TOL)? {
                return Err(Error::Order(format!("{v} is not weakly submajorized by {u}")));
            }
            let excess = (u.sum() - v.sum()).max(0.0);
            let greedy = lower_smallest_toward(u, v, excess);
            if completion_holds(u, v, &greedy, mode)? {
                return Ok(greedy);
            }
            let fallback = shift_extreme(u, -excess, false);
            if completion_holds(u, v, &fallback, mode)? {
                return Ok(fallback);
            }
            Err(Error::Internal(format!("no sub-completion found for u = {u}, v = {v}")))
        }
        MajorizationMode::WeakSup => {
            if !check_majorize(v, u, MajorizationMode::WeakSup, DEFAULT_TOL)? {
                return Err(Error::Order(format!("{v} is not weakly supmajorized by {u}")));
            }
            let deficit = (v.sum() - u.sum()).max(0.0);
            let c = shift_extreme(u, deficit, true);
            if completion_holds(u, v, &c, mode)? {
                return Ok(c);
            }
            Err(Error::Internal(format!("no sup-completion found for u = {u}, v = {v}")))
        }
    }
}

// Lowers the coordinates of u, smallest first, each no further than the
// matching order statistic of v, until `excess` has been removed.
fn lower_smallest_toward(u: &WeightVector, v: &WeightVector, mut excess: f64) -> WeightVector {
    let mut order: Vec<usize> = (0..u.len()).collect();
    order.sort_by(|&a, &b| u.0[a].total_cmp(&u.0[b]));
    let vs = v.sorted_increasing();
    let mut c = u.0.clone();
    for (rank, &idx) in order.iter().enumerate() {
        if excess <= 0.0 {
            break;
        }
        let room = c[idx] - vs.0[rank];
        if room > 0.0 {
            let take = room.min(excess);
            c[idx] -= take;
            excess -= take;
        }
    }
    WeightVector(c)
}

// Moves the largest (or smallest) coordinate of u by `delta`.
fn shift_extreme(u: &WeightVector, delta: f64, largest: bool) -> WeightVector {
    let mut c = u.0.clone();
    let mut idx = 0;
    for (i, &val) in c.iter().enumerate() {
        let better = if largest { val >= c[idx] } else { val < c[idx] };
        if better {
            idx = i;
        }
    }
    c[idx] += delta;
    WeightVector(c)
}

fn completion_holds(u: &WeightVector, v: &WeightVector, c: &WeightVector, mode: MajorizationMode) -> Result<bool> {
    let sandwich = u.0.iter().zip(&c.0).all(|(&ui, &ci)| {
        let s = slack(DEFAULT_TOL, ui, ci);
        match mode {
            MajorizationMode::WeakSub => ci <= ui + s,
            _ => ci >= ui - s,
        }
    });
    Ok(sandwich && check_majorize(v, c, MajorizationMode::Full, DEFAULT_TOL)?)
}

/// The four monotone/convex preservation cases for weak majorization.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PreservationCase {
    /// increasing convex: `x ⪯_w y ⇒ g(x) ⪯_w g(y)`
    IncreasingConvex,
    /// increasing concave: `x ⪯^w y ⇒ g(x) ⪯^w g(y)`
    IncreasingConcave,
    /// decreasing convex: `x ⪯^w y ⇒ g(x) ⪯_w g(y)`
    DecreasingConvex,
    /// decreasing concave: `x ⪯_w y ⇒ g(x) ⪯^w g(y)`
    DecreasingConcave,
}

impl PreservationCase {
    pub fn premise(self) -> MajorizationMode {
        match self {
            PreservationCase::IncreasingConvex | PreservationCase::DecreasingConcave => MajorizationMode::WeakSub,
            PreservationCase::IncreasingConcave | PreservationCase::DecreasingConvex => MajorizationMode::WeakSup,
        }
    }

    pub fn conclusion(self) -> MajorizationMode {
        match self {
            PreservationCase::IncreasingConvex | PreservationCase::DecreasingConvex => MajorizationMode::WeakSub,
            PreservationCase::IncreasingConcave | PreservationCase::DecreasingConcave => MajorizationMode::WeakSup,
        }
    }
}

/// Checks that `g` carries the premise order of `case` between `x` and `y`
/// to the concluded order. The shape of `g` is the caller's claim; this only
/// evaluates the conclusion.
pub fn check_transform_preservation<G: Fn(f64) -> f64>(
    g: G,
    x: &WeightVector,
    y: &WeightVector,
    case: PreservationCase,
) -> Result<bool> {
    if !check_majorize(x, y, case.premise(), DEFAULT_TOL)? {
        return Err(Error::Order(format!("premise {x} ⪯_{} {y} of case {case:?} does not hold", case.premise())));
    }
    let gx = x.map(&g)?;
    let gy = y.map(&g)?;
    check_majorize(&gx, &gy, case.conclusion(), 1e-9)
}
