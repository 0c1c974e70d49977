use alloc::vec::Vec;

use crate::math::{exp, ln};
use crate::{Error, Result};

/// Log-spaced grid of `points` abscissae over `[lo, hi]`, both endpoints
/// included.
///
/// Grid checks only certify "no violation found" on these points; reports
/// carry the grid so readers know the scope of the certificate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogGrid {
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
}

impl LogGrid {
    pub fn new(lo: f64, hi: f64, points: usize) -> Result<Self> {
        if !(lo > 0.0 && hi > lo && hi.is_finite()) {
            return Err(Error::Parameter(alloc::format!("log grid needs 0 < lo < hi < inf, got [{lo}, {hi}]")));
        }
        if points < 2 {
            return Err(Error::Parameter(alloc::format!("log grid needs at least 2 points, got {points}")));
        }
        Ok(Self { lo, hi, points })
    }

    /// 64 points over `[1e-3, 1e3]`, the per-axis default for condition checks.
    pub fn default_axis() -> Self {
        Self { lo: 1e-3, hi: 1e3, points: 64 }
    }

    pub fn values(&self) -> Vec<f64> {
        let (a, b) = (ln(self.lo), ln(self.hi));
        let last = (self.points - 1) as f64;
        (0..self.points)
            .map(|i| {
                if i == 0 {
                    self.lo
                } else if i == self.points - 1 {
                    self.hi
                } else {
                    exp(a + (b - a) * i as f64 / last)
                }
            })
            .collect()
    }
}

impl core::fmt::Display for LogGrid {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "{} log-spaced points over [{:e}, {:e}]", self.points, self.lo, self.hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn endpoints_exact_and_increasing() {
        let g = LogGrid::default_axis().values();
        assert_eq!(g.len(), 64);
        assert_eq!(g[0], 1e-3);
        assert_eq!(g[63], 1e3);
        assert!(g.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn rejects_bad_bounds() {
        assert!(LogGrid::new(0.0, 1.0, 8).is_err());
        assert!(LogGrid::new(2.0, 1.0, 8).is_err());
        assert!(LogGrid::new(1.0, 2.0, 1).is_err());
    }
}
