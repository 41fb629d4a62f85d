//! Generalized master equation with memory kernels.
//!
//! The fractional case `D_t^alpha p = A p` is solved two ways: through the
//! matrix Mittag-Leffler propagator `p(t) = E_alpha(A t^alpha) p(0)`, and
//! by the vectorized Caputo-quadrature time-stepping recursion. The delta
//! (Markov) kernel reduces both to the classical master equation.

use crate::matrix::{self, GraphLaplacian};
use crate::special::gamma_fn;
use crate::{Error, Result};
use nalgebra::DVector;

/// Memory kernel of the generalized master equation. The per-state scale
/// is always the exit rate `|a_jj|` taken from the Laplacian.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MemoryKernel {
    /// Dirac delta: classical (memoryless) master equation.
    Delta,
    /// Caputo kernel `t^(-alpha) / Gamma(1 - alpha)`, `0 < alpha < 1`.
    Caputo { alpha: f64 },
}

impl MemoryKernel {
    pub fn caputo(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "Caputo kernel needs 0 < alpha < 1, got {alpha}"
            )));
        }
        Ok(Self::Caputo { alpha })
    }

    /// Effective Mittag-Leffler order: 1 for the delta kernel.
    pub fn order(&self) -> f64 {
        match self {
            Self::Delta => 1.0,
            Self::Caputo { alpha } => *alpha,
        }
    }
}

/// Laplace-domain kernel descriptor `K(j, s) = coefficient * s^exponent`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelTransform {
    pub coefficient: f64,
    pub exponent: f64,
}

impl KernelTransform {
    pub fn evaluate(&self, s: f64) -> f64 {
        self.coefficient * s.powf(self.exponent)
    }
}

/// Memory function of the Mittag-Leffler process:
/// `K(j, s) = lambda_jj s^(1 - alpha)`. At `alpha = 1` the exponent
/// vanishes and the kernel is the constant rate (delta kernel in time).
pub fn memory_kernel_mlf(alpha: f64, lambda_jj: f64) -> Result<KernelTransform> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "alpha must lie in (0, 1], got {alpha}"
        )));
    }
    if !(lambda_jj > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "lambda_jj must be positive, got {lambda_jj}"
        )));
    }
    Ok(KernelTransform {
        coefficient: lambda_jj,
        exponent: 1.0 - alpha,
    })
}

/// Probability vector: nonnegative entries summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityVector {
    entries: DVector<f64>,
}

impl ProbabilityVector {
    pub fn new(entries: DVector<f64>) -> Result<Self> {
        if let Some(bad) = entries.iter().find(|&&p| p < 0.0) {
            return Err(Error::InvalidProbability(format!(
                "negative entry {bad}"
            )));
        }
        let sum: f64 = entries.iter().sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidProbability(format!(
                "entries sum to {sum}, not 1"
            )));
        }
        Ok(Self { entries })
    }

    /// Accept solver output with floating-point noise: entries above
    /// `-1e-10` are clamped to zero and the vector renormalized, with the
    /// raw violation logged. Anything more negative is a real error.
    pub fn from_solver_output(raw: DVector<f64>) -> Result<Self> {
        let min = raw.iter().cloned().fold(f64::INFINITY, f64::min);
        if min < -1e-10 {
            return Err(Error::InvalidProbability(format!(
                "solver output has entry {min} below the -1e-10 noise floor"
            )));
        }
        let mut clamped = raw;
        if min < 0.0 {
            log::debug!("clamping solver output: most negative entry {min}");
            for p in clamped.iter_mut() {
                if *p < 0.0 {
                    *p = 0.0;
                }
            }
        }
        let sum: f64 = clamped.iter().sum();
        if !(sum > 0.0) {
            return Err(Error::InvalidProbability(
                "solver output sums to zero".into(),
            ));
        }
        clamped /= sum;
        Ok(Self { entries: clamped })
    }

    pub fn vector(&self) -> &DVector<f64> {
        &self.entries
    }

    pub fn entry(&self, j: usize) -> f64 {
        self.entries[j]
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }
}

/// `p(t_i) = E_alpha(A t_i^alpha) p(0)` through the spectral propagator.
pub fn solve_fractional_master_mlf(
    a: &GraphLaplacian,
    alpha: f64,
    p0: &ProbabilityVector,
    times: &[f64],
) -> Result<Vec<ProbabilityVector>> {
    if p0.dim() != a.dim() {
        return Err(Error::InvalidParameter(format!(
            "p0 has dimension {}, Laplacian has {}",
            p0.dim(),
            a.dim()
        )));
    }
    times
        .iter()
        .map(|&t| {
            if t == 0.0 {
                return Ok(p0.clone());
            }
            let propagator = matrix::mlf_matrix_eig(a, alpha, t)?;
            ProbabilityVector::from_solver_output(&propagator * p0.vector())
        })
        .collect()
}

/// Kernel-dispatched solve: the delta kernel is the `alpha = 1`
/// (classical) case of the fractional propagator.
pub fn solve_master(
    a: &GraphLaplacian,
    kernel: MemoryKernel,
    p0: &ProbabilityVector,
    times: &[f64],
) -> Result<Vec<ProbabilityVector>> {
    solve_fractional_master_mlf(a, kernel.order(), p0, times)
}

/// Vectorized Caputo-quadrature recursion for `D_t^alpha p = A p`:
///
/// `p_j = p_{j-1} + h^a Gamma(1-a) A p_{j-1} + sum_{k=2}^{j} (p_{j-k} - p_{j-k+1}) / k^a`
///
/// the matrix form of the scalar fractional Euler scheme. Zero column
/// sums of `A` make the recursion conserve total mass exactly, so only
/// positivity noise needs clamping at the end.
pub fn solve_fractional_master_timestep(
    a: &GraphLaplacian,
    alpha: f64,
    p0: &ProbabilityVector,
    t: f64,
    n: usize,
) -> Result<ProbabilityVector> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "alpha must lie strictly in (0, 1), got {alpha}"
        )));
    }
    assert!(n >= 1, "n must be at least 1");
    if p0.dim() != a.dim() {
        return Err(Error::InvalidParameter(format!(
            "p0 has dimension {}, Laplacian has {}",
            p0.dim(),
            a.dim()
        )));
    }
    let h = t / n as f64;
    let step = a.matrix() * (h.powf(alpha) * gamma_fn(1.0 - alpha)?);
    let inv_pow: Vec<f64> = (0..=n).map(|k| (k.max(1) as f64).powf(-alpha)).collect();
    let mut values: Vec<DVector<f64>> = Vec::with_capacity(n + 1);
    values.push(p0.vector().clone());
    for j in 1..=n {
        let mut next = &values[j - 1] + &step * &values[j - 1];
        for k in 2..=j {
            next.axpy(inv_pow[k], &(&values[j - k] - &values[j - k + 1]), 1.0);
        }
        values.push(next);
    }
    ProbabilityVector::from_solver_output(values.pop().unwrap())
}
