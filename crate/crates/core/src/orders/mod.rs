//! Usual stochastic order between two distributions, decided either from
//! samples (with a DKW confidence band) or from numerically exact cdfs, and
//! the numerical convolution that produces those cdfs for weighted sums.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write as _;

use crate::{Error, Result};

mod convolve;
mod empirical;
mod exact;

pub use convolve::{convolve_weighted, ConvolutionConfig};
pub use empirical::{dkw_epsilon, ecdf, st_compare_empirical};
pub use exact::{crossing_count, st_compare_exact};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Interpolation {
    /// right-continuous step function
    Step,
    /// piecewise linear between grid points
    Linear,
}

/// A cdf tabulated on an increasing grid: 0 below the first point, 1 above
/// the last.
#[derive(Debug, Clone, PartialEq)]
pub struct NumericCdf {
    grid: Vec<f64>,
    values: Vec<f64>,
    step: Option<f64>,
    interpolation: Interpolation,
    tail_tol: f64,
}

impl NumericCdf {
    /// `step` records the uniform grid spacing when there is one.
    pub fn new(
        grid: Vec<f64>,
        values: Vec<f64>,
        step: Option<f64>,
        interpolation: Interpolation,
        tail_tol: f64,
    ) -> Result<Self> {
        if grid.is_empty() || grid.len() != values.len() {
            return Err(Error::Dimension(format!("cdf grid has {} points but {} values", grid.len(), values.len())));
        }
        if grid.windows(2).any(|w| !(w[0] < w[1])) || grid.iter().any(|x| !x.is_finite()) {
            return Err(Error::Parameter("cdf grid must be finite and strictly increasing".into()));
        }
        if values.windows(2).any(|w| w[1] < w[0]) || values.iter().any(|v| !(0.0..=1.0).contains(v)) {
            return Err(Error::Parameter("cdf values must be nondecreasing in [0, 1]".into()));
        }
        Ok(Self { grid, values, step, interpolation, tail_tol })
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn step(&self) -> Option<f64> {
        self.step
    }

    pub fn interpolation(&self) -> Interpolation {
        self.interpolation
    }

    /// Probability mass deliberately left outside the grid.
    pub fn tail_tol(&self) -> f64 {
        self.tail_tol
    }

    pub fn eval(&self, x: f64) -> f64 {
        let g = &self.grid;
        if x < g[0] {
            return 0.0;
        }
        if x >= g[g.len() - 1] {
            return 1.0;
        }
        // Index of the last grid point ≤ x.
        let i = g.partition_point(|&t| t <= x) - 1;
        match self.interpolation {
            Interpolation::Step => self.values[i],
            Interpolation::Linear => {
                let t = (x - g[i]) / (g[i + 1] - g[i]);
                self.values[i] + t * (self.values[i + 1] - self.values[i])
            }
        }
    }

    /// Two-column `x,F` table with a header line.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,F\n");
        for (x, f) in self.grid.iter().zip(&self.values) {
            let _ = writeln!(out, "{x},{f}");
        }
        out
    }
}

/// Outcome of a stochastic-order comparison of `A` against `B`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Relation {
    /// `A ≥_st B`: `F_A ≤ F_B` everywhere (within the band) and strictly
    /// below somewhere.
    ADominates,
    BDominates,
    /// Each cdf exceeds the other by more than the band somewhere.
    Crossing,
    /// Neither excess is beyond the band.
    Inconclusive,
}

impl Relation {
    pub fn name(self) -> &'static str {
        match self {
            Relation::ADominates => "A_DOMINATES",
            Relation::BDominates => "B_DOMINATES",
            Relation::Crossing => "CROSSING",
            Relation::Inconclusive => "INCONCLUSIVE",
        }
    }

    pub fn swapped(self) -> Self {
        match self {
            Relation::ADominates => Relation::BDominates,
            Relation::BDominates => Relation::ADominates,
            other => other,
        }
    }

    fn from_excess(pos: f64, neg: f64, band: f64) -> Self {
        match (pos > band, neg > band) {
            (false, true) => Relation::ADominates,
            (true, false) => Relation::BDominates,
            (true, true) => Relation::Crossing,
            (false, false) => Relation::Inconclusive,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrderVerdict {
    pub relation: Relation,
    /// `sup (F_A - F_B)`
    pub max_a_over_b: f64,
    /// `sup (F_B - F_A)`
    pub max_b_over_a: f64,
    /// Where `F_A - F_B` peaks.
    pub witness_a_over_b: f64,
    pub witness_b_over_a: f64,
    /// Allowance below which an excess is not counted.
    pub band: f64,
    /// Sign changes of `F_A - F_B` beyond the band (exact comparisons only).
    pub crossing_count: Option<usize>,
}
