//! Fractional generalisations of the Euler limit formula.
//!
//! The exponential function is the continuum limit of the discrete
//! compounding process `(1 + t/n)^n`. This crate builds the analogous
//! machinery for the Mittag-Leffler function `E_alpha(z)`, which replaces
//! the exponential throughout fractional calculus:
//!
//! - scalar Mittag-Leffler evaluation by series and by real-axis
//!   exponential-mixture integrals ([`special`]),
//! - the branch-cut probability densities `w-`, `w+`, `W+` with their
//!   CDF/inverse-CDF machinery ([`densities`]),
//! - inverse-transform samplers for Mittag-Leffler and `W+`-mixture
//!   waiting times ([`samplers`]),
//! - discrete Euler-limit schemes: classical, backward, fractional
//!   recursive, Grunwald-Letnikov and weighted sums of Euler limits
//!   ([`euler`]),
//! - Mittag-Leffler functions of graph-Laplacian matrices by three routes
//!   ([`matrix`]),
//! - generalized-master-equation solvers for `D_t^alpha p = A p`
//!   ([`master`]),
//! - continuous-time random walks and Gillespie-style simulation with
//!   pluggable waiting times, including the bundled Schlogl model
//!   ([`ssa`]).

pub mod densities;
pub mod euler;
pub mod master;
pub mod matrix;
pub mod samplers;
pub mod special;
pub mod ssa;

use thiserror::Error;

/// Errors shared across the numerical modules.
#[derive(Debug, Error)]
pub enum Error {
    #[error("gamma function pole at nonpositive integer z = {0}")]
    GammaPole(f64),
    #[error("series did not converge within {cap} terms (last term {last_term:e})")]
    NonConvergence { cap: usize, last_term: f64 },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("overflow: exponent {0} exceeds floating-point range")]
    Overflow(f64),
    #[error("singular step: {0}")]
    SingularStep(String),
    #[error("matrix has complex spectrum: eigenvalue {re} + {im}i")]
    ComplexSpectrum { re: f64, im: f64 },
    #[error("matrix is defective or near-defective: {0}")]
    DefectiveMatrix(String),
    #[error("singular matrix: s = {0} is an eigenvalue")]
    SingularResolvent(f64),
    #[error("Post-Widder coefficient overflow at order n = {0}")]
    CoefficientOverflow(usize),
    #[error("not a graph Laplacian: {0}")]
    InvalidLaplacian(String),
    #[error("invalid probability vector: {0}")]
    InvalidProbability(String),
    #[error("event cap of {0} events reached; runaway trajectory")]
    EventCap(u64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
