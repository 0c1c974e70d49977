//! Strictly monotone transforms `phi`, `psi` on `(0, ∞)`, the Hessian
//! conditions that make `Φ(u, v) = phi(u) psi(v)` convex, the `(p, q)` region
//! classifier for power pairs, and pairwise transform dominance.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::grid::LogGrid;
use crate::math::{exp, ln, powf, E};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    Increasing,
    Decreasing,
}

/// Which theorem family a transform pair is checked against: `phi'' ≥ 0`
/// (convex case, larger spread dominates) or `phi'' ≤ 0` (concave case,
/// reversed conclusion). Both share the product condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    Convex,
    Concave,
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::Convex => "convex",
            Variant::Concave => "concave",
        }
    }
}

type ScalarFn = Box<dyn Fn(f64) -> f64 + Send + Sync>;

struct CustomMap {
    eval: ScalarFn,
    inverse: ScalarFn,
    direction: Direction,
    domain: (f64, f64),
}

#[derive(Clone)]
enum Kind {
    Exp,
    Power(f64),
    LogShift,
    Custom(Arc<CustomMap>),
}

/// Public view of a transform's family, for serialization and dispatch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TransformKind {
    /// `e^x`
    Exp,
    /// `x^r`, `r ≠ 0`
    Power(f64),
    /// `log(x + e)`
    LogShift,
    /// user-supplied map with finite-difference derivatives
    Custom,
}

/// Tolerance used for custom transforms, whose derivatives are finite
/// differences.
pub const FD_TOL: f64 = 1e-5;

// Relative margins below this are treated as exact equality.
const SNAP_ANALYTIC: f64 = 1e-10;

/// A strictly monotone, twice differentiable scalar map with inverse.
///
/// Built-ins carry analytic derivatives; custom maps use a five-point
/// central difference. Every constructor runs [`Transform::validate`].
#[derive(Clone)]
pub struct Transform {
    kind: Kind,
    label: String,
}

impl fmt::Debug for Transform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Transform").field("label", &self.label).finish()
    }
}

impl PartialEq for Transform {
    fn eq(&self, other: &Self) -> bool {
        match (&self.kind, &other.kind) {
            (Kind::Exp, Kind::Exp) | (Kind::LogShift, Kind::LogShift) => true,
            (Kind::Power(a), Kind::Power(b)) => a == b,
            (Kind::Custom(a), Kind::Custom(b)) => Arc::ptr_eq(a, b),
            _ => false,
        }
    }
}

impl fmt::Display for Transform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label)
    }
}

impl Transform {
    pub fn exp() -> Self {
        Self { kind: Kind::Exp, label: "exp".into() }
    }

    /// `x ↦ x^r`; increasing iff `r > 0`.
    pub fn power(r: f64) -> Result<Self> {
        if r == 0.0 || !r.is_finite() {
            return Err(Error::Parameter(format!("power exponent must be finite and nonzero, got {r}")));
        }
        Ok(Self { kind: Kind::Power(r), label: format!("power({r})") })
    }

    /// `x ↦ log(x + e)`, mapping `[0, ∞)` onto `[1, ∞)`.
    pub fn log_shift() -> Self {
        Self { kind: Kind::LogShift, label: "logshift".into() }
    }

    /// A user-supplied map on `domain`. Derivatives come from finite
    /// differences and consistency checks use [`FD_TOL`].
    pub fn custom<F, G>(label: &str, eval: F, inverse: G, domain: (f64, f64)) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
        G: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        let (lo, hi) = domain;
        if !(lo < hi) {
            return Err(Error::Parameter(format!("custom transform domain ({lo}, {hi}) is empty")));
        }
        let (probe_lo, probe_hi) = match (lo.is_finite(), hi.is_finite()) {
            (true, true) => (lo + (hi - lo) / 3.0, lo + 2.0 * (hi - lo) / 3.0),
            (true, false) => (lo + 1.0, lo + 2.0),
            (false, true) => (hi - 2.0, hi - 1.0),
            (false, false) => (0.0, 1.0),
        };
        let direction = if eval(probe_hi) > eval(probe_lo) { Direction::Increasing } else { Direction::Decreasing };
        let t = Self {
            kind: Kind::Custom(Arc::new(CustomMap {
                eval: Box::new(eval),
                inverse: Box::new(inverse),
                direction,
                domain,
            })),
            label: label.to_string(),
        };
        t.validate()?;
        Ok(t)
    }

    pub fn kind(&self) -> TransformKind {
        match self.kind {
            Kind::Exp => TransformKind::Exp,
            Kind::Power(r) => TransformKind::Power(r),
            Kind::LogShift => TransformKind::LogShift,
            Kind::Custom(_) => TransformKind::Custom,
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn is_custom(&self) -> bool {
        matches!(self.kind, Kind::Custom(_))
    }

    pub fn direction(&self) -> Direction {
        match &self.kind {
            Kind::Exp | Kind::LogShift => Direction::Increasing,
            Kind::Power(r) if *r > 0.0 => Direction::Increasing,
            Kind::Power(_) => Direction::Decreasing,
            Kind::Custom(c) => c.direction,
        }
    }

    /// Open interval on which the map is defined and positive.
    pub fn domain(&self) -> (f64, f64) {
        match &self.kind {
            Kind::Exp => (f64::NEG_INFINITY, f64::INFINITY),
            Kind::Power(_) => (0.0, f64::INFINITY),
            Kind::LogShift => (1.0 - E, f64::INFINITY),
            Kind::Custom(c) => c.domain,
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        match &self.kind {
            Kind::Exp => exp(x),
            Kind::Power(r) => powf(x, *r),
            Kind::LogShift => ln(x + E),
            Kind::Custom(c) => (c.eval)(x),
        }
    }

    pub fn d1(&self, x: f64) -> f64 {
        match &self.kind {
            Kind::Exp => exp(x),
            Kind::Power(r) => r * powf(x, r - 1.0),
            Kind::LogShift => 1.0 / (x + E),
            Kind::Custom(_) => five_point(|t| self.eval(t), x).0,
        }
    }

    pub fn d2(&self, x: f64) -> f64 {
        match &self.kind {
            Kind::Exp => exp(x),
            Kind::Power(r) => r * (r - 1.0) * powf(x, r - 2.0),
            Kind::LogShift => -1.0 / ((x + E) * (x + E)),
            Kind::Custom(_) => five_point(|t| self.eval(t), x).1,
        }
    }

    /// `phi'(x) / phi(x)`, computed without forming `phi(x)` where possible.
    pub fn d1_ratio(&self, x: f64) -> f64 {
        match &self.kind {
            Kind::Exp => 1.0,
            Kind::Power(r) => r / x,
            Kind::LogShift => 1.0 / ((x + E) * ln(x + E)),
            Kind::Custom(_) => self.d1(x) / self.eval(x),
        }
    }

    /// `phi''(x) / phi(x)`.
    pub fn d2_ratio(&self, x: f64) -> f64 {
        match &self.kind {
            Kind::Exp => 1.0,
            Kind::Power(r) => r * (r - 1.0) / (x * x),
            Kind::LogShift => -1.0 / ((x + E) * (x + E) * ln(x + E)),
            Kind::Custom(_) => self.d2(x) / self.eval(x),
        }
    }

    /// `log phi(x)`.
    pub fn ln_eval(&self, x: f64) -> f64 {
        match &self.kind {
            Kind::Exp => x,
            Kind::Power(r) => r * ln(x),
            _ => ln(self.eval(x)),
        }
    }

    fn inverse_raw(&self, y: f64) -> f64 {
        match &self.kind {
            Kind::Exp => ln(y),
            Kind::Power(r) => powf(y, 1.0 / r),
            Kind::LogShift => exp(y) - E,
            Kind::Custom(c) => (c.inverse)(y),
        }
    }

    /// `phi⁻¹(y)`; fails when `y` is outside the image of the map.
    pub fn inverse(&self, y: f64) -> Result<f64> {
        let ok_input = match &self.kind {
            Kind::Exp => y > 0.0,
            Kind::Power(r) => y > 0.0 || (y == 0.0 && *r > 0.0),
            Kind::LogShift => y.is_finite(),
            Kind::Custom(_) => y.is_finite(),
        };
        let x = self.inverse_raw(y);
        if !ok_input || !x.is_finite() {
            return Err(Error::Domain(format!("{} has no finite inverse at {y}", self.label)));
        }
        Ok(x)
    }

    /// `phi⁻¹(e^{ly})`, evaluated without forming `e^{ly}` where possible.
    pub fn inverse_from_ln(&self, ly: f64) -> f64 {
        match &self.kind {
            Kind::Exp => ly,
            Kind::Power(r) => exp(ly / r),
            _ => self.inverse_raw(exp(ly)),
        }
    }

    /// Support of `phi⁻¹(X)` for `X` supported on `(lo, hi)`.
    pub fn preimage(&self, lo: f64, hi: f64) -> (f64, f64) {
        let a = self.inverse_raw(lo);
        let b = self.inverse_raw(hi);
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        let (dlo, dhi) = self.domain();
        (if a.is_nan() { dlo } else { a.max(dlo) }, if b.is_nan() { dhi } else { b.min(dhi) })
    }

    /// Construction-time consistency: strict monotonicity, inverse
    /// round-trip within 1e-9 relative, and analytic derivatives matching
    /// five-point differences within a mixed 1e-5 tolerance, all on 33
    /// log-spaced points over `[1e-2, 1e2]` (clipped to the domain).
    pub fn validate(&self) -> Result<()> {
        let grid = LogGrid { lo: 1e-2, hi: 1e2, points: 33 }.values();
        let (dlo, dhi) = self.domain();
        let pts: Vec<f64> = grid.into_iter().filter(|&x| x > dlo && x < dhi).collect();
        if pts.len() < 3 {
            return Err(Error::Parameter(format!("{}: domain misses the validation grid", self.label)));
        }
        let sign = match self.direction() {
            Direction::Increasing => 1.0,
            Direction::Decreasing => -1.0,
        };
        for w in pts.windows(2) {
            let (f0, f1) = (self.eval(w[0]), self.eval(w[1]));
            if !(sign * (f1 - f0) > 0.0) {
                return Err(Error::Parameter(format!(
                    "{} is not strictly {:?} between {} and {}",
                    self.label,
                    self.direction(),
                    w[0],
                    w[1]
                )));
            }
        }
        for &x in &pts {
            let back = self.inverse(self.eval(x))?;
            if (back - x).abs() > 1e-9 * x.abs().max(1.0) {
                return Err(Error::Parameter(format!("{}: inverse(eval({x})) = {back}", self.label)));
            }
            if !self.is_custom() {
                let (fd1, fd2) = five_point(|t| self.eval(t), x);
                let (d1, d2) = (self.d1(x), self.d2(x));
                if (fd1 - d1).abs() > FD_TOL * (1.0 + d1.abs()) || (fd2 - d2).abs() > FD_TOL * (1.0 + d2.abs()) {
                    return Err(Error::Parameter(format!(
                        "{}: derivatives at {x} are ({d1}, {d2}), differences give ({fd1}, {fd2})",
                        self.label
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Five-point central differences `(f', f'')` with step `1e-3·|x|`.
pub fn five_point<F: Fn(f64) -> f64>(f: F, x: f64) -> (f64, f64) {
    let h = if x == 0.0 { 1e-3 } else { 1e-3 * x.abs() };
    let (m2, m1, c, p1, p2) = (f(x - 2.0 * h), f(x - h), f(x), f(x + h), f(x + 2.0 * h));
    let d1 = (m2 - 8.0 * m1 + 8.0 * p1 - p2) / (12.0 * h);
    let d2 = (-m2 + 16.0 * m1 - 30.0 * c + 16.0 * p1 - p2) / (12.0 * h * h);
    (d1, d2)
}

/// One of the two Hessian conditions evaluated over a grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionCheck {
    pub holds: bool,
    /// Largest negated (relative) margin over the grid; `≤ 0` iff `holds`.
    pub worst_violation: f64,
    pub worst_u: f64,
    /// `None` for the one-dimensional sign condition.
    pub worst_v: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConditionReport {
    pub variant: Variant,
    /// `phi'' ≥ 0` (convex case) or `phi'' ≤ 0` (concave case).
    pub sign: ConditionCheck,
    /// `phi''(u) psi''(v) phi(u) psi(v) ≥ [phi'(u) psi'(v)]²`.
    pub product: ConditionCheck,
    pub grid: LogGrid,
}

impl ConditionReport {
    pub fn holds(&self) -> bool {
        self.sign.holds && self.product.holds
    }
}

fn relative_margin(lhs: f64, rhs: f64, snap: f64) -> f64 {
    let den = lhs.abs() + rhs.abs();
    if den == 0.0 {
        return 0.0;
    }
    let m = (lhs - rhs) / den;
    if m.abs() < snap {
        0.0
    } else {
        m
    }
}

/// Evaluates both conditions at every point of `grid × grid`.
///
/// Both sides of the product condition are divided by `phi(u)² psi(v)²`,
/// which keeps the check finite for maps like `e^x` on large arguments.
/// Margins are relative, so a `true` report means no violation on the grid,
/// not a proof over `(0, ∞)²`.
pub fn check_convexity_conditions(
    phi: &Transform,
    psi: &Transform,
    variant: Variant,
    grid: &LogGrid,
) -> Result<ConditionReport> {
    let pts = grid.values();
    let snap = if phi.is_custom() || psi.is_custom() { FD_TOL } else { SNAP_ANALYTIC };
    let ratios = |t: &Transform, x: f64| -> Result<(f64, f64)> {
        let (r1, r2) = (t.d1_ratio(x), t.d2_ratio(x));
        if !r1.is_finite() || !r2.is_finite() {
            return Err(Error::Numeric(format!("{} has non-finite derivatives at {x} (ratios {r1}, {r2})", t.label())));
        }
        Ok((r1, r2))
    };
    let phi_r: Vec<(f64, f64)> = pts.iter().map(|&u| ratios(phi, u)).collect::<Result<_>>()?;
    let psi_r: Vec<(f64, f64)> = pts.iter().map(|&v| ratios(psi, v)).collect::<Result<_>>()?;

    let sign_factor = match variant {
        Variant::Convex => 1.0,
        Variant::Concave => -1.0,
    };
    let mut sign = ConditionCheck { holds: true, worst_violation: f64::NEG_INFINITY, worst_u: pts[0], worst_v: None };
    for (&u, &(r1, r2)) in pts.iter().zip(&phi_r) {
        // Sign of phi''/phi, scaled against (phi'/phi)².
        let den = r2.abs() + r1 * r1;
        let m = if den == 0.0 { 0.0 } else { sign_factor * r2 / den };
        let m = if m.abs() < snap { 0.0 } else { m };
        if -m > sign.worst_violation {
            sign.worst_violation = -m;
            sign.worst_u = u;
        }
    }
    sign.holds = sign.worst_violation <= 0.0;

    let mut product =
        ConditionCheck { holds: true, worst_violation: f64::NEG_INFINITY, worst_u: pts[0], worst_v: Some(pts[0]) };
    for (&u, &(p1, p2)) in pts.iter().zip(&phi_r) {
        for (&v, &(s1, s2)) in pts.iter().zip(&psi_r) {
            let lhs = p2 * s2;
            let rhs = (p1 * s1) * (p1 * s1);
            let m = relative_margin(lhs, rhs, snap);
            if -m > product.worst_violation {
                product.worst_violation = -m;
                product.worst_u = u;
                product.worst_v = Some(v);
            }
        }
    }
    product.holds = product.worst_violation <= 0.0;

    Ok(ConditionReport { variant, sign, product, grid: *grid })
}

/// Regions of `(p, q)` for the power pair `phi(x) = x^{1/q}`,
/// `psi(x) = x^{1/p}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PqRegion {
    /// `p < 0, q < 0`
    A0,
    /// `p < 0, 0 < q < 1, 1/p + 1/q ≥ 1`
    A1,
    /// `0 < p < 1, q < 0, 1/p + 1/q ≥ 1`
    A2,
    /// `p > 1, q > 1, 1/p + 1/q ≤ 1`
    A3,
    None,
}

impl PqRegion {
    pub fn name(self) -> &'static str {
        match self {
            PqRegion::A0 => "A0",
            PqRegion::A1 => "A1",
            PqRegion::A2 => "A2",
            PqRegion::A3 => "A3",
            PqRegion::None => "NONE",
        }
    }

    /// Regions where the convex-case conditions hold for the power pair.
    pub fn is_convex_case(self) -> bool {
        matches!(self, PqRegion::A0 | PqRegion::A1 | PqRegion::A2)
    }
}

impl fmt::Display for PqRegion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Boundary equalities are included exactly as written (`≥` for A1/A2,
/// `≤` for A3) with exact floating-point comparison.
pub fn classify_pq(p: f64, q: f64) -> Result<PqRegion> {
    if p == 0.0 || q == 0.0 || !p.is_finite() || !q.is_finite() {
        return Err(Error::Parameter(format!("p and q must be finite and nonzero, got ({p}, {q})")));
    }
    let s = 1.0 / p + 1.0 / q;
    Ok(if p < 0.0 && q < 0.0 {
        PqRegion::A0
    } else if p < 0.0 && q > 0.0 && q < 1.0 && s >= 1.0 {
        PqRegion::A1
    } else if p > 0.0 && p < 1.0 && q < 0.0 && s >= 1.0 {
        PqRegion::A2
    } else if p > 1.0 && q > 1.0 && s <= 1.0 {
        PqRegion::A3
    } else {
        PqRegion::None
    })
}

/// The pair `(phi, psi) = (x^{1/q}, x^{1/p})`.
pub fn power_pair(p: f64, q: f64) -> Result<(Transform, Transform)> {
    if p == 0.0 || q == 0.0 {
        return Err(Error::Parameter(format!("p and q must be nonzero, got ({p}, {q})")));
    }
    Ok((Transform::power(1.0 / q)?, Transform::power(1.0 / p)?))
}

/// The four sufficient conditions under which `phi2` needs a weaker
/// premise than `phi1` for the same conclusion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DominanceCase {
    /// both increasing, `g` convex
    I,
    /// `phi1` increasing, `phi2` decreasing, `g` concave
    II,
    /// `phi1` decreasing, `phi2` increasing, `g` convex
    III,
    /// both decreasing, `g` concave
    IV,
}

impl DominanceCase {
    pub fn requires_convex(self) -> bool {
        matches!(self, DominanceCase::I | DominanceCase::III)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dominance {
    Phi2Better,
    /// The grid check cannot certify failure, only the absence of evidence.
    Undetermined,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TransformComparison {
    pub dominance: Dominance,
    pub case: DominanceCase,
    /// Largest relative shape violation of `g` over the grid (`≤ 0` when the
    /// required shape holds everywhere).
    pub worst_violation: f64,
    pub worst_x: f64,
    pub grid: LogGrid,
}

/// Default one-dimensional grid for [`compare_transforms`].
pub fn default_compare_grid() -> LogGrid {
    LogGrid { lo: 1e-3, hi: 1e3, points: 256 }
}

/// Forms `g = phi2⁻¹ ∘ phi1` (convex case) or `g = -phi2⁻¹ ∘ phi1` (concave
/// case), picks the dominance case from the two directions and checks the
/// required convexity or concavity of `g` by second divided differences.
pub fn compare_transforms(
    phi1: &Transform,
    phi2: &Transform,
    variant: Variant,
    grid: &LogGrid,
) -> Result<TransformComparison> {
    use Direction::*;
    let case = match (phi1.direction(), phi2.direction()) {
        (Increasing, Increasing) => DominanceCase::I,
        (Increasing, Decreasing) => DominanceCase::II,
        (Decreasing, Increasing) => DominanceCase::III,
        (Decreasing, Decreasing) => DominanceCase::IV,
    };
    let sign = match variant {
        Variant::Convex => 1.0,
        Variant::Concave => -1.0,
    };
    let xs = grid.values();
    let mut gs = Vec::with_capacity(xs.len());
    for &x in &xs {
        let g = sign * phi2.inverse_from_ln(phi1.ln_eval(x));
        if !g.is_finite() {
            return Err(Error::Numeric(format!("{}⁻¹ ∘ {} leaves the domain at x = {x}", phi2.label(), phi1.label())));
        }
        gs.push(g);
    }
    let shape_sign = if case.requires_convex() { 1.0 } else { -1.0 };
    let mut worst = f64::NEG_INFINITY;
    let mut worst_x = xs[0];
    for i in 1..xs.len() - 1 {
        let s1 = (gs[i] - gs[i - 1]) / (xs[i] - xs[i - 1]);
        let s2 = (gs[i + 1] - gs[i]) / (xs[i + 1] - xs[i]);
        let den = s1.abs() + s2.abs();
        let rel = if den == 0.0 { 0.0 } else { shape_sign * (s2 - s1) / den };
        let rel = if rel.abs() < 1e-8 { 0.0 } else { rel };
        if -rel > worst {
            worst = -rel;
            worst_x = xs[i];
        }
    }
    let dominance = if worst <= 0.0 { Dominance::Phi2Better } else { Dominance::Undetermined };
    Ok(TransformComparison { dominance, case, worst_violation: worst, worst_x, grid: *grid })
}
