//! Mittag-Leffler functions of graph-Laplacian matrices.
//!
//! A graph Laplacian here is a square matrix with nonnegative
//! off-diagonals and zero column sums (the generator convention of the
//! Markov-process literature). `E_alpha(A t^alpha)` of such a matrix is a
//! stochastic matrix, and this module computes it by three routes:
//!
//! - spectral: apply the scalar function to the eigenvalues,
//! - exponential mixture: quadrature of
//!   `int w_(-,1)(s) exp(-s (-A)^(1/alpha) t) ds`,
//! - Post-Widder / resolvent: the truncated limit
//!   `(1/n!) sum_k b_(k,n+1) (I - (t/n)^alpha A)^(-k)`, whose entrywise
//!   nonnegativity is the positivity mechanism.

use crate::densities::{self, DensityKind, DensitySpec};
use crate::special::{self, MlfParams, QuadratureGrid, Sign};
use crate::{Error, Result};
use nalgebra::DMatrix;
use std::collections::HashMap;

/// Validated generator matrix: nonnegative off-diagonals, zero column
/// sums.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphLaplacian {
    entries: DMatrix<f64>,
}

impl GraphLaplacian {
    /// Validate and wrap a square matrix, reporting the offending entry
    /// or column on failure.
    pub fn new(entries: DMatrix<f64>) -> Result<Self> {
        if entries.nrows() != entries.ncols() {
            return Err(Error::InvalidLaplacian(format!(
                "matrix is {}x{}, not square",
                entries.nrows(),
                entries.ncols()
            )));
        }
        let n = entries.nrows();
        let norm = entries.amax().max(1.0);
        for j in 0..n {
            for i in 0..n {
                if i != j && entries[(i, j)] < 0.0 {
                    return Err(Error::InvalidLaplacian(format!(
                        "off-diagonal entry ({i}, {j}) = {} is negative",
                        entries[(i, j)]
                    )));
                }
            }
            let col_sum: f64 = entries.column(j).iter().sum();
            if col_sum.abs() > 1e-12 * norm {
                return Err(Error::InvalidLaplacian(format!(
                    "column {j} sums to {col_sum}, not zero"
                )));
            }
        }
        Ok(Self { entries })
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.entries
    }

    /// Exit rate `|a_jj|` of state `j`.
    pub fn exit_rate(&self, j: usize) -> f64 {
        self.entries[(j, j)].abs()
    }

    /// Jump probability from state `j` to state `i != j`:
    /// `lambda(i, j) = a_ij / |a_jj|`.
    pub fn jump_probability(&self, i: usize, j: usize) -> f64 {
        self.entries[(i, j)] / self.exit_rate(j)
    }
}

/// Alias for [`GraphLaplacian::new`]; returns the validated instance or
/// a structured violation report.
pub fn validate_laplacian(entries: DMatrix<f64>) -> Result<GraphLaplacian> {
    GraphLaplacian::new(entries)
}

/// Eigendecomposition `A = V diag(values) V^-1` of a graph Laplacian with
/// real, distinct, nonpositive spectrum.
#[derive(Debug, Clone)]
pub struct Eigendecomposition {
    pub values: Vec<f64>,
    pub vectors: DMatrix<f64>,
    pub inverse: DMatrix<f64>,
}

const EIGENVECTOR_CONDITION_LIMIT: f64 = 1e8;

impl Eigendecomposition {
    /// Decompose via the (real) eigenvalues from the Schur form followed
    /// by inverse iteration for each eigenvector. Rejects complex spectra
    /// and defective (or near-defective) matrices.
    pub fn compute(a: &GraphLaplacian) -> Result<Self> {
        let m = a.matrix();
        let n = a.dim();
        let scale = m.amax().max(f64::MIN_POSITIVE);

        let complex = m.clone().complex_eigenvalues();
        let mut values = Vec::with_capacity(n);
        for ev in complex.iter() {
            if ev.im.abs() > 1e-9 * scale {
                return Err(Error::ComplexSpectrum {
                    re: ev.re,
                    im: ev.im,
                });
            }
            values.push(ev.re);
        }
        // Zero mode first, then increasingly negative.
        values.sort_by(|x, y| y.partial_cmp(x).unwrap());
        // Snap the Markov zero mode exactly: a graph Laplacian always has
        // eigenvalue 0 with left eigenvector (1, ..., 1).
        if values[0].abs() <= n as f64 * f64::EPSILON * scale * 100.0 {
            values[0] = 0.0;
        }

        let mut vectors = DMatrix::zeros(n, n);
        for (idx, &lambda) in values.iter().enumerate() {
            let v = inverse_iteration(m, lambda, scale)?;
            vectors.set_column(idx, &v);
        }
        let inverse = vectors.clone().lu().try_inverse().ok_or_else(|| {
            Error::DefectiveMatrix("eigenvector matrix is singular".into())
        })?;
        let cond = matrix_inf_norm(&vectors) * matrix_inf_norm(&inverse);
        if cond > EIGENVECTOR_CONDITION_LIMIT {
            return Err(Error::DefectiveMatrix(format!(
                "eigenvector condition number {cond:.2e} exceeds limit"
            )));
        }

        let decomp = Self {
            values,
            vectors,
            inverse,
        };
        let residual = matrix_inf_norm(&(decomp.reconstruct() - m));
        if residual > 1e-10 * matrix_inf_norm(m).max(1.0) {
            return Err(Error::DefectiveMatrix(format!(
                "reconstruction residual {residual:.2e} too large"
            )));
        }
        Ok(decomp)
    }

    /// `V diag(f(lambda_i)) V^-1`.
    pub fn apply(&self, f: impl Fn(f64) -> f64) -> DMatrix<f64> {
        let diag: Vec<f64> = self.values.iter().map(|&l| f(l)).collect();
        let mut scaled = self.vectors.clone();
        for (j, d) in diag.iter().enumerate() {
            scaled.column_mut(j).scale_mut(*d);
        }
        scaled * &self.inverse
    }

    fn reconstruct(&self) -> DMatrix<f64> {
        self.apply(|l| l)
    }
}

fn matrix_inf_norm(m: &DMatrix<f64>) -> f64 {
    (0..m.nrows())
        .map(|i| m.row(i).iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// A few rounds of inverse iteration at a slightly shifted eigenvalue.
fn inverse_iteration(
    m: &DMatrix<f64>,
    lambda: f64,
    scale: f64,
) -> Result<nalgebra::DVector<f64>> {
    let n = m.nrows();
    let shift = lambda + 1e-10 * scale;
    let shifted = m - DMatrix::identity(n, n) * shift;
    let lu = shifted.lu();
    // Deterministic, mildly irregular start vector.
    let mut v = nalgebra::DVector::from_fn(n, |i, _| 1.0 + (i as f64 + 1.0).sin() * 0.37);
    for _ in 0..4 {
        v = lu.solve(&v).ok_or_else(|| {
            Error::DefectiveMatrix(format!("inverse iteration stalled at eigenvalue {lambda}"))
        })?;
        let norm = v.norm();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::DefectiveMatrix(format!(
                "inverse iteration diverged at eigenvalue {lambda}"
            )));
        }
        v /= norm;
    }
    // Fix an overall sign for determinism.
    if let Some(first) = v.iter().find(|x| x.abs() > 1e-12) {
        if *first < 0.0 {
            v = -v;
        }
    }
    Ok(v)
}

/// Outcome of a stochastic-matrix check.
#[derive(Debug, Clone, Copy)]
pub struct StochasticReport {
    pub min_entry: f64,
    pub max_column_sum_deviation: f64,
    pub pass: bool,
}

/// Check that `m` has entries `>= -tol` and column sums within `tol` of 1.
pub fn stochastic_check(m: &DMatrix<f64>, tol: f64) -> StochasticReport {
    let min_entry = m.iter().cloned().fold(f64::INFINITY, f64::min);
    let max_dev = (0..m.ncols())
        .map(|j| (m.column(j).iter().sum::<f64>() - 1.0).abs())
        .fold(0.0, f64::max);
    StochasticReport {
        min_entry,
        max_column_sum_deviation: max_dev,
        pass: min_entry >= -tol && max_dev <= tol,
    }
}

/// Fractional power `(-A)^(1/alpha) = V diag((-lambda_i)^(1/alpha)) V^-1`,
/// with `0^(1/alpha) = 0`.
pub fn frac_power(a: &GraphLaplacian, alpha: f64) -> Result<DMatrix<f64>> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "alpha must lie in (0, 1], got {alpha}"
        )));
    }
    let eig = Eigendecomposition::compute(a)?;
    if let Some(bad) = eig.values.iter().find(|&&l| l > 0.0) {
        return Err(Error::InvalidLaplacian(format!(
            "positive eigenvalue {bad}; spectrum must be nonpositive"
        )));
    }
    Ok(eig.apply(|l| if l == 0.0 { 0.0 } else { (-l).powf(1.0 / alpha) }))
}

/// `E_alpha(A t^alpha)` by diagonalization: apply the scalar
/// Mittag-Leffler evaluator to each eigenvalue.
pub fn mlf_matrix_eig(a: &GraphLaplacian, alpha: f64, t: f64) -> Result<DMatrix<f64>> {
    if t < 0.0 {
        return Err(Error::Domain(format!("t must be nonnegative, got {t}")));
    }
    let eig = Eigendecomposition::compute(a)?;
    let mut diag = Vec::with_capacity(eig.values.len());
    for &l in &eig.values {
        let v = if l == 0.0 || t == 0.0 {
            1.0
        } else {
            let params = MlfParams::new(alpha, -l)?;
            special::mlf(params, Sign::Minus, t)?
        };
        diag.push(v);
    }
    let mut scaled = eig.vectors.clone();
    for (j, d) in diag.iter().enumerate() {
        scaled.column_mut(j).scale_mut(*d);
    }
    Ok(scaled * &eig.inverse)
}

/// `E_alpha(A t^alpha)` as the exponential mixture
/// `sum_k w_(-,1)(s_k) Delta_k exp(-s_k (-A)^(1/alpha) t)`, with the
/// matrix exponentials evaluated through the eigendecomposition of the
/// fixed matrix `(-A)^(1/alpha)`.
pub fn mlf_matrix_mixture(
    a: &GraphLaplacian,
    alpha: f64,
    t: f64,
    grid: QuadratureGrid,
) -> Result<DMatrix<f64>> {
    if t < 0.0 {
        return Err(Error::Domain(format!("t must be nonnegative, got {t}")));
    }
    if alpha >= 1.0 {
        // w_(-,1) is a point mass at 1: plain matrix exponential.
        let eig = Eigendecomposition::compute(a)?;
        return Ok(eig.apply(|l| (l * t).exp()));
    }
    let eig = Eigendecomposition::compute(a)?;
    let spec = DensitySpec::new(MlfParams::new(alpha, 1.0)?, DensityKind::WMinusUnit)?;
    // Each eigenvalue mu_i = (-lambda_i)^(1/alpha) of (-A)^(1/alpha) sees
    // the scalar mixture int w_(-,1)(s) exp(-s mu_i t) ds.
    let mus: Vec<f64> = eig
        .values
        .iter()
        .map(|&l| if l >= 0.0 { 0.0 } else { (-l).powf(1.0 / alpha) })
        .collect();
    let mixed: Vec<f64> = mus
        .iter()
        .map(|&mu| {
            grid.integrate_log(|s| densities::density_eval_unchecked(&spec, s) * (-s * mu * t).exp())
        })
        .collect();
    let mut scaled = eig.vectors.clone();
    for (j, d) in mixed.iter().enumerate() {
        scaled.column_mut(j).scale_mut(*d);
    }
    Ok(scaled * &eig.inverse)
}

/// Resolvent `(s I - A)^(-1)` by dense LU solve.
pub fn resolvent(a: &GraphLaplacian, s: f64) -> Result<DMatrix<f64>> {
    let n = a.dim();
    let shifted = DMatrix::identity(n, n) * s - a.matrix();
    shifted
        .lu()
        .try_inverse()
        .ok_or(Error::SingularResolvent(s))
}

/// Post-Widder approximant of order `n`:
///
/// `E_alpha(A t^alpha) ~ ((-1)^n / n!) (n/t)^(n+1) d^n/ds^n [s^(alpha-1) (s^alpha I - A)^(-1)]`
/// evaluated at `s = n/t`.
///
/// The n-th derivative is generated by a term-table recurrence over terms
/// `c s^(i + m alpha) (s^alpha I - A)^(-k)`:
/// differentiating one term yields
/// `c (i + m alpha) s^(i-1+m alpha) (...)^(-k)` and
/// `-c k alpha s^(i-1+(m+1) alpha) (...)^(-k-1)`.
/// Every approximant is entrywise nonnegative for a graph Laplacian.
pub fn post_widder_mlf(a: &GraphLaplacian, alpha: f64, t: f64, n: usize) -> Result<DMatrix<f64>> {
    if !(t > 0.0) {
        return Err(Error::Domain(format!("t must be positive, got {t}")));
    }
    if n == 0 || n > 20 {
        return Err(Error::CoefficientOverflow(n));
    }
    let terms = post_widder_terms(alpha, n);
    let s = n as f64 / t;

    // Group scalar prefactors by resolvent power k.
    let dim = a.dim();
    let mut by_power: HashMap<u32, f64> = HashMap::new();
    for (&(i, m, k), &c) in &terms {
        let exponent = i as f64 + m as f64 * alpha;
        *by_power.entry(k).or_insert(0.0) += c * s.powf(exponent);
    }
    let k_max = by_power.keys().copied().max().unwrap();

    let shifted = DMatrix::identity(dim, dim) * s.powf(alpha) - a.matrix();
    let r = shifted
        .lu()
        .try_inverse()
        .ok_or(Error::SingularResolvent(s))?;

    let mut acc = DMatrix::zeros(dim, dim);
    let mut r_pow = DMatrix::identity(dim, dim);
    for k in 1..=k_max {
        r_pow *= &r;
        if let Some(&c) = by_power.get(&k) {
            acc += &r_pow * c;
        }
    }

    let mut factorial = 1.0;
    for j in 1..=n {
        factorial *= j as f64;
    }
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    let prefactor = sign / factorial * (n as f64 / t).powi(n as i32 + 1);
    if !prefactor.is_finite() {
        return Err(Error::CoefficientOverflow(n));
    }
    Ok(acc * prefactor)
}

/// Coefficient table of `d^n/ds^n [s^(alpha-1) (s^alpha - lambda)^(-1)]`
/// as a map `(i, m, k) -> c` of terms `c s^(i + m alpha) (s^alpha - lambda)^(-k)`.
fn post_widder_terms(alpha: f64, n: usize) -> HashMap<(i64, i64, u32), f64> {
    let mut terms: HashMap<(i64, i64, u32), f64> = HashMap::new();
    terms.insert((-1, 1, 1), 1.0);
    for _ in 0..n {
        let mut next: HashMap<(i64, i64, u32), f64> = HashMap::new();
        for (&(i, m, k), &c) in &terms {
            let exponent = i as f64 + m as f64 * alpha;
            if exponent != 0.0 {
                *next.entry((i - 1, m, k)).or_insert(0.0) += c * exponent;
            }
            *next.entry((i - 1, m + 1, k + 1)).or_insert(0.0) -= c * k as f64 * alpha;
        }
        terms = next;
    }
    terms
}

/// Scalar evaluation of the same derivative table, exposed for validation
/// against finite differences of `s^(alpha-1)/(s^alpha - lambda)`.
pub fn transform_derivative_scalar(alpha: f64, lambda: f64, s: f64, n: usize) -> f64 {
    let terms = post_widder_terms(alpha, n);
    let sa = s.powf(alpha);
    terms
        .iter()
        .map(|(&(i, m, k), &c)| {
            c * s.powf(i as f64 + m as f64 * alpha) / (sa - lambda).powi(k as i32)
        })
        .sum()
}
