//! Majorization orders, monotone-transform conditions and stochastic-order
//! checks for weighted sums of independent nonnegative random variables.
//!
//! The crate is `no_std` (it needs `alloc`). Everything here is a pure
//! function of its inputs; file formats, the command line and parallel
//! suite execution live in the `schurorder` companion crate.
//!
//! Layout:
//!
//! - [`majorization`]: majorization and weak majorization, T-transform
//!   chains, weak-majorization completions, transform preservation.
//! - [`transforms`]: the transform pairs `(phi, psi)`, the Hessian
//!   conditions, the `(p, q)` region classifier and transform dominance.
//! - [`distributions`]: generalized gamma family, log-concavity and
//!   likelihood-ratio comparisons, change of variables.
//! - [`orders`]: empirical and exact usual-stochastic-order decisions,
//!   numerical convolution of weighted sums.
//! - [`harness`]: theorem scenarios, hypothesis checks, the crossing
//!   counterexample and randomized suites.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

mod error;
mod math;

pub mod distributions;
pub mod fft;
pub mod grid;
pub mod harness;
pub mod majorization;
pub mod orders;
pub mod quad;
pub mod rng;
pub mod transforms;

pub use error::{Error, Result};

pub use distributions::{Continuous, DensitySpec, DistSpec, Family, GeneralizedGamma, InverseGeneralizedGamma};
pub use grid::LogGrid;
pub use majorization::{MajorizationMode, TChain, WeightVector};
pub use orders::{NumericCdf, OrderVerdict, Relation};
pub use transforms::{Direction, PqRegion, Transform, Variant};

/// Crate version, embedded in reports.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
