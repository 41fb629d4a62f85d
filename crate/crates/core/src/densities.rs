//! The branch-cut densities behind the exponential-mixture
//! representations.
//!
//! `w_-(s)` weights the mixture for `E_alpha(-lambda t^alpha)`, `w_+(s)`
//! the branch-cut integral for a positive argument, and
//! `W_+ = w_+ / C` with `C = 1/alpha - 1` is the normalised version whose
//! mixture `phi_{W+}(t)` is a heavy-tailed survival function. The exact
//! antiderivative of `w_+` (an ArcTan expression with case corrections
//! across its singular points `s_1`, `s_2`) gives a closed-form CDF `G`
//! and inverse CDF, which is what makes fast inverse-transform sampling
//! possible.

use crate::special::{MlfParams, QuadratureGrid};
use crate::{Error, Result};
use std::f64::consts::PI;

/// Which member of the density family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DensityKind {
    /// `w_-(s)`: mixture density for a negative argument.
    WMinus,
    /// `w_+(s)`: unnormalised branch-cut weight for a positive argument.
    WPlus,
    /// `W_+(s) = w_+(s) / C`: normalised probability density.
    WPlusNormalized,
    /// `w_{-,1}(s)`: the `lambda = 1` special case of `w_-`.
    WMinusUnit,
}

/// A density together with its parameters. Requires `alpha` strictly
/// inside `(0, 1)`; at `alpha = 1` every member degenerates to a point
/// mass.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensitySpec {
    params: MlfParams,
    kind: DensityKind,
}

impl DensitySpec {
    pub fn new(params: MlfParams, kind: DensityKind) -> Result<Self> {
        if params.alpha() >= 1.0 {
            return Err(Error::InvalidParameter(
                "densities are undefined at alpha = 1".into(),
            ));
        }
        if kind == DensityKind::WMinusUnit && params.lambda() != 1.0 {
            return Err(Error::InvalidParameter(format!(
                "w_(-,1) forces lambda = 1, got {}",
                params.lambda()
            )));
        }
        Ok(Self { params, kind })
    }

    pub fn params(&self) -> MlfParams {
        self.params
    }

    pub fn kind(&self) -> DensityKind {
        self.kind
    }
}

/// `C = 1/alpha - 1`, the total mass of `w_+`.
pub fn normalization_c(alpha: f64) -> Result<f64> {
    check_order(alpha)?;
    Ok(1.0 / alpha - 1.0)
}

fn check_order(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "alpha must lie strictly in (0, 1), got {alpha}"
        )));
    }
    Ok(())
}

/// `int_0^inf w_+(s) ds` by log-substituted trapezoid; must reproduce
/// `1/alpha - 1` within grid tolerance (and is independent of lambda).
pub fn normalization_c_numeric(alpha: f64, lambda: f64, grid: QuadratureGrid) -> Result<f64> {
    check_order(alpha)?;
    let spec = DensitySpec::new(MlfParams::new(alpha, lambda)?, DensityKind::WPlus)?;
    let coarse = grid.integrate_log(|s| density_eval_unchecked(&spec, s));
    let fine = grid.refined().integrate_log(|s| density_eval_unchecked(&spec, s));
    if (coarse - fine).abs() > 1e-11 {
        log::warn!(
            "quadrature grid too coarse for normalization constant: \
             n={} gives {coarse}, doubled grid gives {fine}",
            grid.n_points()
        );
    }
    Ok(fine)
}

/// Pointwise density value at `s > 0`.
pub fn density_eval(spec: &DensitySpec, s: f64) -> Result<f64> {
    if !(s > 0.0) {
        return Err(Error::Domain(format!("density argument must be positive, got {s}")));
    }
    Ok(density_eval_unchecked(spec, s))
}

/// Same as [`density_eval`] without the domain check; used in quadrature
/// inner loops where `s = exp(x) > 0` by construction.
pub(crate) fn density_eval_unchecked(spec: &DensitySpec, s: f64) -> f64 {
    let alpha = spec.params.alpha();
    let lambda = spec.params.lambda();
    match spec.kind {
        DensityKind::WMinus => w_signed(alpha, lambda, s),
        DensityKind::WMinusUnit => w_signed(alpha, 1.0, s),
        DensityKind::WPlus => w_signed(alpha, -lambda, s),
        DensityKind::WPlusNormalized => {
            w_signed(alpha, -lambda, s) * alpha / (1.0 - alpha)
        }
    }
}

/// `|lambda| sin(alpha pi)/pi * s^(alpha-1) / (s^2a + 2 lambda s^a cos(alpha pi) + lambda^2)`.
///
/// Passing a negative `lambda` produces `w_+` (the sign flip in the
/// middle denominator term together with the overall sign).
fn w_signed(alpha: f64, lambda: f64, s: f64) -> f64 {
    let sa = s.powf(alpha);
    let denom = sa * sa + 2.0 * lambda * sa * (alpha * PI).cos() + lambda * lambda;
    lambda.abs() * (alpha * PI).sin() / PI * s.powf(alpha - 1.0) / denom
}

/// Lower branch-point of the antiderivative: `s_1 = (2 lambda cos(alpha pi) - lambda)^(1/alpha)`.
/// Only real for `alpha < 1/3`.
pub fn singular_point_s1(alpha: f64, lambda: f64) -> Option<f64> {
    let base = 2.0 * lambda * (alpha * PI).cos() - lambda;
    (base > 0.0).then(|| base.powf(1.0 / alpha))
}

/// Upper branch-point: `s_2 = lambda^(1/alpha)`.
pub fn singular_point_s2(alpha: f64, lambda: f64) -> f64 {
    lambda.powf(1.0 / alpha)
}

/// Exact antiderivative `g(s) = int w_+(s) ds`, normalised so
/// `g -> 0` as `s -> inf`.
///
/// `g` is the raw ArcTan expression `g~(s)` minus a case correction
/// (`-1/alpha` below `s_1` when `alpha < 1/3`, `-1/(2 alpha)` between the
/// relevant branch points). The case is selected by comparing `s^alpha`
/// against the same quantities appearing in the ArcTan denominators, so
/// the one-sided `ArcTan(+-inf) = +-pi/2` limits and the correction
/// always stay consistent; `g` is continuous across both points.
pub fn antiderivative_g(spec: &DensitySpec, s: f64) -> Result<f64> {
    if spec.kind != DensityKind::WPlus {
        return Err(Error::InvalidParameter(
            "antiderivative_g is defined for the w_+ density".into(),
        ));
    }
    if !(s > 0.0) {
        return Err(Error::Domain(format!("g argument must be positive, got {s}")));
    }
    let alpha = spec.params.alpha();
    let lambda = spec.params.lambda();
    let sa = s.powf(alpha);
    let cos_term = 2.0 * lambda * (alpha * PI).cos();
    let tan_half = (alpha * PI / 2.0).tan();

    // The arctan denominators vanish exactly at s_1 and s_2. Both the
    // ratios and the case selection below use these same computed
    // differences, so the branch the IEEE atan lands on (with
    // atan(+-inf) = +-pi/2, and division by +0 selecting the upper side)
    // can never disagree with the correction.
    let d1 = sa - (cos_term - lambda);
    let d2 = sa - lambda;
    let first = ((sa - (cos_term + lambda)) / d1 * tan_half).atan();
    let second = ((sa + lambda) / d2 * tan_half).atan();
    let g_tilde = (first - second) / (2.0 * alpha * PI);

    let s1_exists = cos_term - lambda > 0.0; // only when alpha < 1/3
    let correction = if s1_exists && d1 < 0.0 {
        1.0 / alpha
    } else if d2 < 0.0 {
        1.0 / (2.0 * alpha)
    } else {
        0.0
    };
    Ok(g_tilde - correction)
}

/// CDF of `W_+`: `G(T) = 1 + g(T)/C`, mapping `(0, inf) -> (0, 1)`.
pub fn cdf_g(spec: &DensitySpec, t_upper: f64) -> Result<f64> {
    if !(t_upper > 0.0) {
        return Err(Error::Domain(format!(
            "CDF argument must be positive, got {t_upper}"
        )));
    }
    let c = normalization_c(spec.params.alpha())?;
    Ok(1.0 + antiderivative_g(spec, t_upper)? / c)
}

/// Inverse CDF: `T = Q(C u)^(1/alpha)` with
/// `Q(v) = lambda (sin(alpha pi (1+2v)) - sin(alpha pi)) / sin(2 alpha pi (1+v))`.
pub fn inv_cdf_g(spec: &DensitySpec, u: f64) -> Result<f64> {
    if !(u > 0.0 && u < 1.0) {
        return Err(Error::Domain(format!("u must lie in (0, 1), got {u}")));
    }
    let alpha = spec.params.alpha();
    let lambda = spec.params.lambda();
    let c = normalization_c(alpha)?;
    Ok(q_of_v(alpha, lambda, c * u).powf(1.0 / alpha))
}

/// `Q(v)`. Where `sin(2 alpha pi (1+v))` vanishes the singularity is
/// removable in exact arithmetic but unstable in floating point, so the
/// value is taken as a symmetric two-sided average.
pub(crate) fn q_of_v(alpha: f64, lambda: f64, v: f64) -> f64 {
    let raw = |v: f64| {
        lambda * ((alpha * PI * (1.0 + 2.0 * v)).sin() - (alpha * PI).sin())
            / (2.0 * alpha * PI * (1.0 + v)).sin()
    };
    if (2.0 * alpha * PI * (1.0 + v)).sin().abs() < 1e-8 {
        let eps = 1e-8;
        0.5 * (raw(v - eps) + raw(v + eps))
    } else {
        raw(v)
    }
}

/// Survival mixture `phi_{W+}(t) = int W_+(s) exp(-s t) ds` by quadrature.
pub fn survival_phi_wplus(spec: &DensitySpec, t: f64, grid: QuadratureGrid) -> Result<f64> {
    if t < 0.0 {
        return Err(Error::Domain(format!("t must be nonnegative, got {t}")));
    }
    let norm = DensitySpec::new(spec.params, DensityKind::WPlusNormalized)?;
    Ok(grid
        .refined()
        .integrate_log(|s| density_eval_unchecked(&norm, s) * (-s * t).exp()))
}

/// Laplace transform of `phi_{W+}`:
/// `alpha/(1-alpha) (1/(alpha (s - lambda^(1/alpha))) - s^(alpha-1)/(s^alpha - lambda))`.
///
/// Defined for `s` beyond the pole at `lambda^(1/alpha)`.
pub fn laplace_phi_wplus(spec: &DensitySpec, s: f64) -> Result<f64> {
    let alpha = spec.params.alpha();
    let lambda = spec.params.lambda();
    let pole = lambda.powf(1.0 / alpha);
    if s <= pole {
        return Err(Error::Domain(format!(
            "Laplace argument must exceed the pole at lambda^(1/alpha) = {pole}, got {s}"
        )));
    }
    Ok(alpha / (1.0 - alpha)
        * (1.0 / (alpha * (s - pole)) - s.powf(alpha - 1.0) / (s.powf(alpha) - lambda)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::{mlf_positive_branchcut, MlfParams, QuadratureGrid};
    use approx::assert_relative_eq;

    fn spec(alpha: f64, lambda: f64, kind: DensityKind) -> DensitySpec {
        DensitySpec::new(MlfParams::new(alpha, lambda).unwrap(), kind).unwrap()
    }

    #[test]
    fn w_minus_half_at_one_is_inverse_two_pi() {
        let s = spec(0.5, 1.0, DensityKind::WMinus);
        assert_relative_eq!(
            density_eval(&s, 1.0).unwrap(),
            1.0 / (2.0 * PI),
            max_relative = 1e-14
        );
    }

    #[test]
    fn w_plus_normalised_equals_w_minus_at_alpha_half() {
        let wm = spec(0.5, 1.0, DensityKind::WMinus);
        let wp = spec(0.5, 1.0, DensityKind::WPlusNormalized);
        for s in [0.1, 1.0, 10.0] {
            assert_relative_eq!(
                density_eval(&wm, s).unwrap(),
                density_eval(&wp, s).unwrap(),
                max_relative = 1e-12
            );
        }
    }

    #[test]
    fn w_minus_tail_decays_algebraically() {
        // w(1e5)/w(1e4) ~ 10^(-alpha-1) within 5% at alpha = 0.9
        let s = spec(0.9, 1.0, DensityKind::WMinus);
        let ratio = density_eval(&s, 1e5).unwrap() / density_eval(&s, 1e4).unwrap();
        let expected = 10f64.powf(-1.9);
        assert!(
            (ratio / expected - 1.0).abs() < 0.05,
            "ratio {ratio} vs {expected}"
        );
    }

    #[test]
    fn density_rejects_nonpositive_s() {
        let s = spec(0.5, 1.0, DensityKind::WMinus);
        assert!(density_eval(&s, 0.0).is_err());
        assert!(density_eval(&s, -1.0).is_err());
    }

    #[test]
    fn densities_are_nonnegative_everywhere() {
        for alpha in [0.15, 0.4, 0.5, 0.75, 0.95] {
            for kind in [
                DensityKind::WMinus,
                DensityKind::WPlus,
                DensityKind::WPlusNormalized,
            ] {
                let sp = spec(alpha, 1.3, kind);
                for k in -30..=30 {
                    let s = (k as f64 / 3.0).exp();
                    assert!(density_eval(&sp, s).unwrap() >= 0.0);
                }
            }
        }
    }

    #[test]
    fn normalization_closed_form() {
        assert_relative_eq!(normalization_c(0.5).unwrap(), 1.0);
        assert_relative_eq!(normalization_c(0.25).unwrap(), 3.0);
        assert!(normalization_c(0.999).unwrap() < 2e-3);
        assert!(normalization_c(1.0).is_err());
    }

    #[test]
    fn normalization_numeric_matches_closed_form() {
        for alpha in [0.5, 0.7] {
            let grid = QuadratureGrid::default_for(alpha);
            let c = normalization_c_numeric(alpha, 1.0, grid).unwrap();
            assert_relative_eq!(c, 1.0 / alpha - 1.0, epsilon = 1e-9);
        }
    }

    #[test]
    fn normalization_numeric_is_lambda_independent() {
        let grid = QuadratureGrid::default_for(0.9);
        let a = normalization_c_numeric(0.9, 3.0, grid).unwrap();
        let b = normalization_c_numeric(0.9, 1.0, grid).unwrap();
        assert!((a - b).abs() < 1e-8);
        assert_relative_eq!(a, 1.0 / 0.9 - 1.0, epsilon = 1e-8);
    }

    #[test]
    fn w_minus_and_w_plus_normalise_numerically() {
        for alpha in [0.3, 0.6, 0.9] {
            let grid = QuadratureGrid::default_for(alpha);
            for kind in [DensityKind::WMinus, DensityKind::WPlusNormalized] {
                let sp = spec(alpha, 1.0, kind);
                let mass = grid.integrate_log(|s| density_eval_unchecked(&sp, s));
                assert!((mass - 1.0).abs() < 1e-8, "alpha={alpha} {kind:?}: {mass}");
            }
        }
    }

    #[test]
    fn lambda_scaling_identity() {
        // lambda^(1/alpha) w_-(lambda^(1/alpha) s; lambda) = w_(-,1)(s)
        for alpha in [0.3, 0.7] {
            for lambda in [0.5, 2.0] {
                let scaled = spec(alpha, lambda, DensityKind::WMinus);
                let unit = spec(alpha, 1.0, DensityKind::WMinusUnit);
                let scale = lambda.powf(1.0 / alpha);
                for s in [0.1, 1.0, 7.0] {
                    assert_relative_eq!(
                        scale * density_eval(&scaled, scale * s).unwrap(),
                        density_eval(&unit, s).unwrap(),
                        max_relative = 1e-12
                    );
                }
            }
        }
    }

    #[test]
    fn inversion_symmetry_of_unit_density() {
        // w_(-,1)(1/s) = s^2 w_(-,1)(s): substitute 1/s in the closed form
        // and clear the powers.
        for alpha in [0.2, 0.5, 0.8] {
            let unit = spec(alpha, 1.0, DensityKind::WMinusUnit);
            for s in [0.2, 0.9, 3.0, 25.0] {
                assert_relative_eq!(
                    density_eval(&unit, 1.0 / s).unwrap(),
                    s * s * density_eval(&unit, s).unwrap(),
                    max_relative = 1e-12
                );
            }
        }
    }

    #[test]
    fn g_is_continuous_across_branch_points() {
        let eps = 1e-6;
        for alpha in [0.2, 0.5, 0.8] {
            let sp = spec(alpha, 1.0, DensityKind::WPlus);
            let mut points = vec![singular_point_s2(alpha, 1.0)];
            if let Some(s1) = singular_point_s1(alpha, 1.0) {
                points.push(s1);
            }
            for p in points {
                let below = antiderivative_g(&sp, p * (1.0 - eps)).unwrap();
                let above = antiderivative_g(&sp, p * (1.0 + eps)).unwrap();
                assert!(
                    (below - above).abs() < 1e-4,
                    "jump at alpha={alpha}, s={p}: {below} vs {above}"
                );
                // The value at the point itself sits between the one-sided limits.
                let at = antiderivative_g(&sp, p).unwrap();
                assert!((at - below).abs() < 1e-4 && (at - above).abs() < 1e-4);
            }
        }
    }

    #[test]
    fn g_limits_recover_normalization() {
        // the limits converge like s^(+-alpha), so push far out
        for alpha in [0.2, 0.45, 0.8] {
            let sp = spec(alpha, 1.0, DensityKind::WPlus);
            let total =
                antiderivative_g(&sp, 1e200).unwrap() - antiderivative_g(&sp, 1e-200).unwrap();
            assert!(
                (total - (1.0 / alpha - 1.0)).abs() < 1e-12,
                "alpha={alpha}: {total}"
            );
        }
    }

    #[test]
    fn cdf_closed_form_at_alpha_half() {
        // G(T) = (2/pi) arctan(sqrt(T)) for alpha = 1/2, lambda = 1.
        let sp = spec(0.5, 1.0, DensityKind::WPlus);
        for t in [0.25, 1.0, 4.0] {
            assert_relative_eq!(
                cdf_g(&sp, t).unwrap(),
                2.0 / PI * t.sqrt().atan(),
                epsilon = 1e-10
            );
        }
        assert_relative_eq!(cdf_g(&sp, 1.0).unwrap(), 0.5, epsilon = 1e-12);
    }

    #[test]
    fn cdf_is_nondecreasing_and_normalised() {
        for alpha in [0.2, 0.5, 0.8] {
            let sp = spec(alpha, 1.0, DensityKind::WPlus);
            let mut prev = 0.0;
            for k in 0..1000 {
                let t = 10f64.powf(-5.0 + 10.0 * k as f64 / 999.0);
                let g = cdf_g(&sp, t).unwrap();
                assert!(g >= prev - 1e-12, "alpha={alpha} t={t}");
                prev = g;
            }
            let t_max = 10f64.powf(15.0 / alpha);
            assert!((cdf_g(&sp, t_max).unwrap() - 1.0).abs() < 1e-6);
        }
    }

    #[test]
    fn inverse_cdf_hand_value() {
        let sp = spec(0.5, 1.0, DensityKind::WPlus);
        assert_relative_eq!(inv_cdf_g(&sp, 0.5).unwrap(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn inverse_cdf_roundtrip_and_monotone() {
        for alpha in [0.2, 0.4, 0.6, 0.8] {
            let sp = spec(alpha, 1.0, DensityKind::WPlus);
            let mut prev = 0.0;
            for k in 1..=99 {
                let u = k as f64 / 100.0;
                let t = inv_cdf_g(&sp, u).unwrap();
                assert!(t > prev, "alpha={alpha} u={u}: not increasing");
                prev = t;
                let back = cdf_g(&sp, t).unwrap();
                assert!(
                    (back - u).abs() < 1e-9,
                    "alpha={alpha} u={u}: roundtrip {back}"
                );
            }
        }
    }

    #[test]
    fn cdf_matches_numeric_integral_of_wplus() {
        for alpha in [0.35, 0.65] {
            let sp = spec(alpha, 1.0, DensityKind::WPlus);
            let norm = spec(alpha, 1.0, DensityKind::WPlusNormalized);
            for k in 0..20 {
                let t_up = 10f64.powf(-2.0 + 4.0 * k as f64 / 19.0);
                // integrate W_+ on (0, t_up] in the log variable
                let grid = QuadratureGrid::new(-40.0 / alpha, t_up.ln(), 20_001).unwrap();
                let numeric = grid.integrate_log(|s| density_eval_unchecked(&norm, s));
                let exact = cdf_g(&sp, t_up).unwrap();
                assert!(
                    (numeric - exact).abs() < 1e-6,
                    "alpha={alpha} T={t_up}: {numeric} vs {exact}"
                );
            }
        }
    }

    #[test]
    fn survival_starts_at_one_and_has_heavy_tail() {
        let sp = spec(0.9, 1.0, DensityKind::WPlus);
        let grid = QuadratureGrid::default_for(0.9);
        assert_relative_eq!(survival_phi_wplus(&sp, 0.0, grid).unwrap(), 1.0, epsilon = 1e-8);
        let tail = survival_phi_wplus(&sp, 5.0, grid).unwrap();
        assert!(tail > (-5.0f64).exp(), "phi(5) = {tail} not heavier than exp");
    }

    #[test]
    fn survival_consistent_with_branchcut_rearrangement() {
        // phi_{W+}(t) = alpha/(1-alpha) (exp(t lambda^(1/a))/alpha - E_a(+lambda t^a))
        let alpha = 0.7;
        let params = MlfParams::new(alpha, 1.0).unwrap();
        let sp = DensitySpec::new(params, DensityKind::WPlus).unwrap();
        let grid = QuadratureGrid::default_for(alpha);
        for t in [0.5, 1.0, 2.0] {
            let direct = survival_phi_wplus(&sp, t, grid).unwrap();
            let e = mlf_positive_branchcut(params, t, grid).unwrap();
            let rearranged = alpha / (1.0 - alpha) * ((t as f64).exp() / alpha - e);
            assert!(
                (direct - rearranged).abs() < 1e-6,
                "t={t}: {direct} vs {rearranged}"
            );
        }
    }

    #[test]
    fn laplace_transform_hand_value() {
        let sp = spec(0.5, 1.0, DensityKind::WPlus);
        assert_relative_eq!(
            laplace_phi_wplus(&sp, 4.0).unwrap(),
            1.0 / 6.0,
            max_relative = 1e-12
        );
        assert!(laplace_phi_wplus(&sp, 1.0).is_err());
    }

    #[test]
    fn laplace_initial_value_rule() {
        // s * L{phi}(s) -> phi(0+) = 1 as s -> inf
        let sp = spec(0.7, 1.0, DensityKind::WPlus);
        let v = 1e8 * laplace_phi_wplus(&sp, 1e8).unwrap();
        assert!((v - 1.0).abs() < 1e-2, "limit {v}");
    }

    #[test]
    fn laplace_matches_numerical_transform() {
        let alpha = 0.7;
        let sp = spec(alpha, 1.0, DensityKind::WPlus);
        let grid = QuadratureGrid::default_for(alpha);
        let s = 2.0;
        // int_0^200 exp(-s t) phi(t) dt, log-substituted in t because phi
        // has a t^alpha cusp at the origin
        let t_grid = QuadratureGrid::new(-30.0, 200f64.ln(), 4001).unwrap();
        let acc = t_grid
            .integrate_log(|t| (-s * t).exp() * survival_phi_wplus(&sp, t, grid).unwrap());
        let exact = laplace_phi_wplus(&sp, s).unwrap();
        assert!((acc - exact).abs() < 1e-5, "{acc} vs {exact}");
    }

    #[test]
    fn spec_validation() {
        let p = MlfParams::new(1.0, 1.0).unwrap();
        assert!(DensitySpec::new(p, DensityKind::WMinus).is_err());
        let q = MlfParams::new(0.5, 2.0).unwrap();
        assert!(DensitySpec::new(q, DensityKind::WMinusUnit).is_err());
        assert!(DensitySpec::new(q, DensityKind::WPlus).is_ok());
    }
}
