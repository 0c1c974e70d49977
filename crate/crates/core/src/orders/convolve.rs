use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::{Interpolation, NumericCdf};
use crate::distributions::Continuous;
use crate::fft;
use crate::math::ceil;
use crate::{Error, Result};

/// Grid refinement controls for [`convolve_weighted`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvolutionConfig {
    /// Lattice cells across the truncated support at the first level.
    pub initial_cells: usize,
    /// Number of grid doublings allowed after the first level.
    pub max_levels: u32,
    /// Stop once two successive levels agree to this sup-norm distance.
    pub refine_tol: f64,
    /// Each component is truncated at this upper-tail probability.
    pub tail_tol: f64,
}

impl Default for ConvolutionConfig {
    fn default() -> Self {
        Self { initial_cells: 1 << 12, max_levels: 8, refine_tol: 1e-7, tail_tol: 1e-9 }
    }
}

struct Component<'a, D: ?Sized> {
    dist: &'a D,
    weight: f64,
    lo: f64,
    hi: f64,
}

/// Cdf of `Σ wᵢ Xᵢ` for independent `Xᵢ` and nonnegative weights.
///
/// Each `wᵢ Xᵢ` is put on a lattice of spacing `h` anchored at its lower
/// support point, with exact cell masses (tails folded into the end cells)
/// and a uniform law inside each cell. The lattice parts are convolved by
/// FFT; the uniform parts add an Irwin–Hall term evaluated exactly at lattice
/// points. The grid doubles until successive levels agree within
/// `refine_tol` at the coarser points and the linear-interpolation error
/// bound (a second difference over 8) is below it too; otherwise a numeric
/// error is returned.
/// Zero weights are dropped; at least one weight must be positive.
pub fn convolve_weighted<D: Continuous>(dists: &[D], weights: &[f64], cfg: &ConvolutionConfig) -> Result<NumericCdf> {
    if dists.len() != weights.len() {
        return Err(Error::Dimension(format!("{} distributions but {} weights", dists.len(), weights.len())));
    }
    if dists.is_empty() {
        return Err(Error::Dimension("nothing to convolve".into()));
    }
    if let Some(w) = weights.iter().find(|w| !(**w >= 0.0 && w.is_finite())) {
        return Err(Error::Parameter(format!("weights must be finite and nonnegative, got {w}")));
    }
    if cfg.initial_cells < 2 || !(cfg.refine_tol > 0.0) || !(cfg.tail_tol > 0.0 && cfg.tail_tol < 0.5) {
        return Err(Error::Parameter(format!("invalid convolution settings {cfg:?}")));
    }
    let mut comps = Vec::new();
    for (d, &w) in dists.iter().zip(weights) {
        if w == 0.0 {
            continue;
        }
        let (slo, _) = d.support();
        let lo = if slo.is_finite() { slo } else { d.quantile(cfg.tail_tol) };
        let hi = d.upper_quantile(cfg.tail_tol);
        if !lo.is_finite() || !hi.is_finite() || !(lo < hi) {
            return Err(Error::Numeric(format!("cannot truncate {} at tail {}", d.label(), cfg.tail_tol)));
        }
        comps.push(Component { dist: d, weight: w, lo: w * lo, hi: w * hi });
    }
    if comps.is_empty() {
        return Err(Error::Parameter("at least one weight must be positive".into()));
    }
    let start: f64 = comps.iter().map(|c| c.lo).sum();
    let span: f64 = comps.iter().map(|c| c.hi - c.lo).sum();
    let irwin_hall = irwin_hall_at_integers(comps.len());

    let mut coarse: Option<Vec<f64>> = None;
    let mut last_diff = f64::INFINITY;
    for level in 0..=cfg.max_levels {
        let cells = cfg.initial_cells << level;
        let h = span / cells as f64;
        let values = lattice_cdf(&comps, h, &irwin_hall);
        if let Some(prev) = &coarse {
            last_diff = prev
                .iter()
                .enumerate()
                .map(|(m, &v)| (v - values.get(2 * m).copied().unwrap_or(1.0)).abs())
                .fold(0.0, f64::max);
            // Linear interpolation between grid points must be as accurate
            // as the grid values themselves.
            let interpolation_error =
                values.windows(3).map(|w| (w[2] - 2.0 * w[1] + w[0]).abs() / 8.0).fold(0.0, f64::max);
            last_diff = last_diff.max(interpolation_error);
            if last_diff < cfg.refine_tol {
                let grid = (0..values.len()).map(|m| start + m as f64 * h).collect();
                return NumericCdf::new(
                    grid,
                    values,
                    Some(h),
                    Interpolation::Linear,
                    cfg.tail_tol * comps.len() as f64,
                );
            }
        }
        coarse = Some(values);
    }
    Err(Error::Numeric(format!(
        "convolution did not converge: successive levels differ by {last_diff:e} (tolerance {:e})",
        cfg.refine_tol
    )))
}

// Lattice cdf values at `start + m h`, m = 0 ..= Σ cellsᵢ.
fn lattice_cdf<D: Continuous + ?Sized>(comps: &[Component<'_, D>], h: f64, irwin_hall: &[f64]) -> Vec<f64> {
    let mut pmf = vec![1.0];
    for c in comps {
        let cells = (ceil((c.hi - c.lo) / h) as usize).max(1);
        let masses = cell_masses(c, h, cells);
        pmf = fft::convolve(&pmf, &masses);
    }
    for v in &mut pmf {
        *v = v.max(0.0);
    }
    let n = comps.len();
    let mut prefix = Vec::with_capacity(pmf.len());
    let mut acc = 0.0;
    for &p in &pmf {
        acc += p;
        prefix.push(acc);
    }
    let len = pmf.len();
    let mut out = Vec::with_capacity(len + n);
    let mut running = 0.0f64;
    for m in 0..len + n {
        let mut v = if m >= n { prefix[(m - n).min(len - 1)] } else { 0.0 };
        for (i, &f) in irwin_hall.iter().enumerate().take(n).skip(1) {
            if m >= i && m - i < len {
                v += pmf[m - i] * f;
            }
        }
        running = running.max(v.min(1.0));
        out.push(running);
    }
    out
}

fn cell_masses<D: Continuous + ?Sized>(c: &Component<'_, D>, h: f64, cells: usize) -> Vec<f64> {
    // (cdf, sf) at each cell edge, each taken from the side that keeps
    // relative precision.
    let edges: Vec<(f64, f64)> = (0..=cells)
        .map(|j| {
            let x = (c.lo + j as f64 * h) / c.weight;
            let f = c.dist.cdf(x);
            if f > 0.5 {
                let s = c.dist.sf(x);
                (1.0 - s, s)
            } else {
                (f, 1.0 - f)
            }
        })
        .collect();
    let mut masses: Vec<f64> = edges
        .windows(2)
        .map(|e| {
            let m = if e[1].0 <= 0.5 { e[1].0 - e[0].0 } else { e[0].1 - e[1].1 };
            m.max(0.0)
        })
        .collect();
    masses[0] += edges[0].0;
    masses[cells - 1] += edges[cells].1;
    masses
}

/// `P(U₁ + … + Uₙ ≤ k)` for `k = 0 ..= n`, from Eulerian numbers (all terms
/// positive, so no cancellation).
fn irwin_hall_at_integers(n: usize) -> Vec<f64> {
    // e[m] = A(k, m) / k! for the current k.
    let mut e = vec![1.0];
    for k in 1..n {
        let k1 = (k + 1) as f64;
        let mut next = vec![0.0; k + 1];
        for (m, slot) in next.iter_mut().enumerate() {
            let left = if m >= 1 { (k1 - m as f64) * e[m - 1] } else { 0.0 };
            let right = if m < e.len() { (m as f64 + 1.0) * e[m] } else { 0.0 };
            *slot = (left + right) / k1;
        }
        e = next;
    }
    let mut out = vec![0.0; n + 1];
    let mut acc = 0.0;
    for k in 1..=n {
        acc += e[k - 1];
        out[k] = acc.min(1.0);
    }
    out[n] = 1.0;
    out
}
