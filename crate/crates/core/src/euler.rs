//! Discrete Euler-limit constructions.
//!
//! Classical `(1 + t/n)^n` and backward `(1 - t/n)^(-n)` limits, the
//! fractional recursive scheme obtained by quadrature on the Caputo
//! derivative (growth and decay variants share the same memory sum), the
//! implicit Grunwald-Letnikov scheme, and the weighted-sum-of-Euler-limits
//! form in which the Mittag-Leffler function appears as a quadrature
//! mixture of classical Euler limits.

use crate::special::{gamma_fn, QuadratureGrid, Sign};
use crate::densities::{self, DensityKind, DensitySpec};
use crate::special::MlfParams;
use crate::{Error, Result};

/// Full run of a recursive scheme: the iterates `y_0 ... y_n`, the step
/// size, the continuum target and the final absolute error.
#[derive(Debug, Clone)]
pub struct SchemeResult {
    pub values: Vec<f64>,
    pub h: f64,
    pub target: f64,
    pub abs_error: f64,
}

impl SchemeResult {
    fn new(values: Vec<f64>, h: f64, target: f64) -> Self {
        let abs_error = (values[values.len() - 1] - target).abs();
        Self {
            values,
            h,
            target,
            abs_error,
        }
    }

    pub fn final_value(&self) -> f64 {
        self.values[self.values.len() - 1]
    }
}

/// Kahan-compensated running sum for the long memory tails.
#[derive(Default, Clone, Copy)]
struct Compensated {
    sum: f64,
    comp: f64,
}

impl Compensated {
    fn add(&mut self, term: f64) {
        let y = term - self.comp;
        let t = self.sum + y;
        self.comp = (t - self.sum) - y;
        self.sum = t;
    }
}

/// `y_j = (1 + h) y_{j-1}`, so `y_n = (1 + t/n)^n -> exp(t)`.
pub fn euler_classic(t: f64, n: usize) -> SchemeResult {
    assert!(n >= 1, "n must be at least 1");
    let h = t / n as f64;
    let mut values = Vec::with_capacity(n + 1);
    values.push(1.0);
    for j in 1..=n {
        values.push((1.0 + h) * values[j - 1]);
    }
    SchemeResult::new(values, h, t.exp())
}

/// Backward-difference Euler formula `(1 - t/n)^(-n) -> exp(t)`.
pub fn euler_backward(t: f64, n: usize) -> Result<f64> {
    assert!(n >= 1, "n must be at least 1");
    let h = t / n as f64;
    if h == 1.0 {
        return Err(Error::SingularStep(format!("t/n = 1 at t={t}, n={n}")));
    }
    Ok((1.0 - h).powi(-(n as i32)))
}

/// Fractional recursive Euler scheme from quadrature on the Caputo
/// derivative of `D_t^alpha y = +-y`:
///
/// `y_j = (1 +- h^a Gamma(1-a)) y_{j-1} + sum_{k=2}^{j} (y_{j-k} - y_{j-k+1}) / k^a`
///
/// Converges (slowly) to `E_alpha(+-t^alpha)`.
pub fn frac_euler(alpha: f64, sign: Sign, t: f64, n: usize) -> Result<SchemeResult> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "alpha must lie strictly in (0, 1), got {alpha}"
        )));
    }
    assert!(n >= 1, "n must be at least 1");
    let h = t / n as f64;
    let gamma = gamma_fn(1.0 - alpha)?;
    let growth = match sign {
        Sign::Plus => 1.0 + h.powf(alpha) * gamma,
        Sign::Minus => 1.0 - h.powf(alpha) * gamma,
    };
    // Precompute k^(-alpha).
    let inv_pow: Vec<f64> = (0..=n).map(|k| (k.max(1) as f64).powf(-alpha)).collect();
    let mut values = Vec::with_capacity(n + 1);
    values.push(1.0);
    for j in 1..=n {
        let mut memory = Compensated::default();
        for k in 2..=j {
            memory.add((values[j - k] - values[j - k + 1]) * inv_pow[k]);
        }
        values.push(growth * values[j - 1] + memory.sum);
    }
    let params = MlfParams::new(alpha, 1.0)?;
    let target = crate::special::mlf(params, sign, t)?;
    Ok(SchemeResult::new(values, h, target))
}

/// Grunwald-Letnikov weights `w_j = (-1)^j binom(-alpha, j)` via the
/// recurrence `w_j = w_{j-1} (j - 1 + alpha) / j`; all positive for
/// `0 < alpha < 1`.
pub fn gl_weights(alpha: f64, n: usize) -> Vec<f64> {
    let mut w = Vec::with_capacity(n + 1);
    w.push(1.0);
    for j in 1..=n {
        let prev = w[j - 1];
        w.push(prev * (j as f64 - 1.0 + alpha) / j as f64);
    }
    w
}

/// Implicit Grunwald-Letnikov scheme
/// `y_j = (1 - h^a)^(-1) (y_0 + h^a sum_{m=0}^{j-1} w_{j-m} y_m)`,
/// converging to `E_alpha(t^alpha)`.
pub fn gl_scheme(alpha: f64, t: f64, n: usize) -> Result<SchemeResult> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "alpha must lie strictly in (0, 1), got {alpha}"
        )));
    }
    assert!(n >= 1, "n must be at least 1");
    let h = t / n as f64;
    let ha = h.powf(alpha);
    if ha == 1.0 {
        return Err(Error::SingularStep(format!(
            "h^alpha = 1 at t={t}, n={n}: pole of (1 - h^alpha)^(-1)"
        )));
    }
    let w = gl_weights(alpha, n);
    let scale = 1.0 / (1.0 - ha);
    let mut values = Vec::with_capacity(n + 1);
    values.push(1.0);
    for j in 1..=n {
        let mut acc = Compensated::default();
        for m in 0..j {
            acc.add(w[j - m] * values[m]);
        }
        values.push(scale * (values[0] + ha * acc.sum));
    }
    let params = MlfParams::new(alpha, 1.0)?;
    let target = crate::special::mlf(params, Sign::Plus, t)?;
    Ok(SchemeResult::new(values, h, target))
}

/// Outcome of a weighted Euler sum, with the count of grid points dropped
/// because `1 - s_k t/n <= -1` would make the classical Euler term
/// unstable.
#[derive(Debug, Clone, Copy)]
pub struct WeightedEulerResult {
    pub value: f64,
    pub dropped_points: usize,
}

/// Weighted sum of classical Euler limits.
///
/// Decay: `sum_k w_k (1 - s_k t/n)^n` with `w_k` a renormalised
/// discretization of `w_-`. Growth:
/// `(1 + t lambda^(1/a)/n)^n / alpha - (1-alpha)/alpha sum_k W_k (1 - s_k t/n)^n`
/// with `W_k` from the normalised `W_+` density. Weights are renormalised
/// to unit mass over the full grid before unstable points are dropped, so
/// the retained sum stays a faithful quadrature of the mixture integral.
pub fn weighted_euler(
    alpha: f64,
    lambda: f64,
    sign: Sign,
    t: f64,
    n: usize,
    grid: QuadratureGrid,
) -> Result<WeightedEulerResult> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "alpha must lie strictly in (0, 1), got {alpha}"
        )));
    }
    assert!(n >= 1, "n must be at least 1");
    let params = MlfParams::new(alpha, lambda)?;
    let kind = match sign {
        Sign::Minus => DensityKind::WMinus,
        Sign::Plus => DensityKind::WPlusNormalized,
    };
    let spec = DensitySpec::new(params, kind)?;

    let dx = (grid.x_max() - grid.x_min()) / (grid.n_points() - 1) as f64;
    let mut abscissae = Vec::with_capacity(grid.n_points());
    let mut weights = Vec::with_capacity(grid.n_points());
    let mut total = 0.0;
    for k in 0..grid.n_points() {
        let x = grid.x_min() + k as f64 * dx;
        let s = x.exp();
        let mut w = densities::density_eval_unchecked(&spec, s) * s * dx;
        if k == 0 || k + 1 == grid.n_points() {
            w *= 0.5;
        }
        abscissae.push(s);
        weights.push(w);
        total += w;
    }
    // Renormalise so the discrete weights integrate to exactly one.
    for w in &mut weights {
        *w /= total;
    }

    let mut sum = Compensated::default();
    let mut dropped = 0usize;
    for (s, w) in abscissae.iter().zip(&weights) {
        let base = 1.0 - s * t / n as f64;
        if base <= -1.0 {
            dropped += 1;
            continue;
        }
        sum.add(w * base.powi(n as i32));
    }
    if dropped > 0 {
        log::warn!(
            "weighted_euler dropped {dropped} unstable grid points with |1 - s t/n| >= 1 \
             (alpha={alpha}, t={t}, n={n})"
        );
    }
    let value = match sign {
        Sign::Minus => sum.sum,
        Sign::Plus => {
            let base = 1.0 + t * lambda.powf(1.0 / alpha) / n as f64;
            base.powi(n as i32) / alpha - (1.0 - alpha) / alpha * sum.sum
        }
    };
    Ok(WeightedEulerResult {
        value,
        dropped_points: dropped,
    })
}
