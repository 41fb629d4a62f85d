//! Seeded inverse-transform samplers for exponential, Mittag-Leffler and
//! `W_+`-mixture waiting times.
//!
//! The Mittag-Leffler sampler is the product form
//! `tau = -(1/lambda)^(1/a) (sin(pi a)/tan(pi a (1-u1)) - cos(pi a))^(1/a) log(u2)`,
//! the `W_+` sampler replaces the first factor by `Q(C u1)^(1/a)`. Both
//! reduce to `-log(u)/lambda` as `alpha -> 1`.
//!
//! Randomness comes from a counter-based stream cipher so that ensembles
//! can assign one independent stream per trajectory without shared
//! mutable state.

use crate::densities;
use crate::special::MlfParams;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

/// A reproducible random stream: `(seed, stream_id)` fully determines the
/// sample sequence, and distinct stream ids are statistically
/// independent (ChaCha stream construction).
#[derive(Debug, Clone)]
pub struct RngStream {
    rng: ChaCha8Rng,
    seed: u64,
    stream_id: u64,
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream_id);
        Self {
            rng,
            seed,
            stream_id,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    /// Uniform draw strictly inside `(0, 1)`; endpoint values are
    /// rejected because the samplers feed them to `log` and `tan`.
    pub fn uniform_open(&mut self) -> f64 {
        loop {
            let u: f64 = self.rng.gen();
            if u > 0.0 && u < 1.0 {
                return u;
            }
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }
}

/// `tau = -log(u)/rate`.
pub fn sample_exponential(rate: f64, rng: &mut RngStream) -> f64 {
    assert!(rate > 0.0, "rate must be positive");
    -rng.uniform_open().ln() / rate
}

/// Mittag-Leffler waiting time by the two-uniform product formula.
/// At `alpha = 1` this is exactly the exponential sampler.
pub fn sample_mlf_waiting(params: MlfParams, rng: &mut RngStream) -> f64 {
    let alpha = params.alpha();
    let lambda = params.lambda();
    if alpha == 1.0 {
        return sample_exponential(lambda, rng);
    }
    let u1 = rng.uniform_open();
    let u2 = rng.uniform_open();
    mlf_waiting_from_uniforms(alpha, lambda, u1, u2)
}

pub(crate) fn mlf_waiting_from_uniforms(alpha: f64, lambda: f64, u1: f64, u2: f64) -> f64 {
    let factor = ((alpha * PI).sin() / (alpha * PI * (1.0 - u1)).tan() - (alpha * PI).cos())
        .powf(1.0 / alpha);
    -(1.0 / lambda).powf(1.0 / alpha) * factor * u2.ln()
}

/// `W_+`-mixture waiting time: `v = C u1`, prefactor `Q(v)^(1/alpha)`.
/// Distributed with survival function `phi_{W+}`.
pub fn sample_wplus_waiting(params: MlfParams, rng: &mut RngStream) -> f64 {
    let alpha = params.alpha();
    let lambda = params.lambda();
    assert!(alpha < 1.0, "W_+ mixture requires alpha < 1");
    let u1 = rng.uniform_open();
    let u2 = rng.uniform_open();
    wplus_waiting_from_uniforms(alpha, lambda, u1, u2)
}

pub(crate) fn wplus_waiting_from_uniforms(alpha: f64, lambda: f64, u1: f64, u2: f64) -> f64 {
    let c = 1.0 / alpha - 1.0;
    // Q already carries the lambda scale; the 1/lambda^(1/alpha) prefactor
    // of the sampling formula cancels it, leaving the unit-rate shape.
    let q = densities::q_of_v(alpha, 1.0, c * u1);
    -(1.0 / lambda).powf(1.0 / alpha) * q.powf(1.0 / alpha) * u2.ln()
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::densities::{survival_phi_wplus, DensityKind, DensitySpec};
    use crate::special::{mlf, mlf_series, QuadratureGrid, Sign};
    use approx::assert_relative_eq;

    /// Two-sided KS statistic of `samples` against an analytic CDF.
    pub(crate) fn ks_statistic(samples: &mut [f64], cdf: impl Fn(f64) -> f64) -> f64 {
        samples.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let n = samples.len() as f64;
        let mut d: f64 = 0.0;
        for (i, &x) in samples.iter().enumerate() {
            let f = cdf(x);
            d = d.max((f - i as f64 / n).abs());
            d = d.max(((i + 1) as f64 / n - f).abs());
        }
        d
    }

    fn two_sample_ks(a: &mut [f64], b: &mut [f64]) -> f64 {
        a.sort_by(|x, y| x.partial_cmp(y).unwrap());
        b.sort_by(|x, y| x.partial_cmp(y).unwrap());
        let (mut i, mut j) = (0usize, 0usize);
        let (na, nb) = (a.len() as f64, b.len() as f64);
        let mut d: f64 = 0.0;
        while i < a.len() && j < b.len() {
            if a[i] <= b[j] {
                i += 1;
            } else {
                j += 1;
            }
            d = d.max((i as f64 / na - j as f64 / nb).abs());
        }
        d
    }

    #[test]
    fn exponential_plug_in_value() {
        // u = e^{-1}, rate 2 -> tau = 0.5
        assert_relative_eq!(-(1f64.exp().recip().ln()) / 2.0, 0.5);
    }

    #[test]
    fn exponential_mean_and_ks() {
        let mut rng = RngStream::new(42, 0);
        let n = 1_000_000;
        let mut sum = 0.0;
        for _ in 0..n {
            sum += sample_exponential(1.0, &mut rng);
        }
        let mean = sum / n as f64;
        assert!((mean - 1.0).abs() < 0.005, "mean {mean}");

        let mut rng = RngStream::new(7, 1);
        let mut samples: Vec<f64> = (0..100_000)
            .map(|_| sample_exponential(1.0, &mut rng))
            .collect();
        let d = ks_statistic(&mut samples, |t| 1.0 - (-t).exp());
        assert!(d < 0.006, "KS = {d}");
    }

    #[test]
    fn mlf_waiting_alpha_one_collapses_prefactor() {
        // tau = -log(u2)/lambda regardless of u1
        let tau = mlf_waiting_from_uniforms(1.0 - 1e-12, 2.0, 0.3, 1f64.exp().recip());
        assert!((tau - 0.5).abs() < 1e-6, "tau = {tau}");
    }

    #[test]
    fn determinism_bit_for_bit() {
        let mut a = RngStream::new(123, 5);
        let mut b = RngStream::new(123, 5);
        let p = MlfParams::new(0.7, 1.0).unwrap();
        for _ in 0..1000 {
            assert_eq!(
                sample_mlf_waiting(p, &mut a).to_bits(),
                sample_mlf_waiting(p, &mut b).to_bits()
            );
        }
        // distinct streams diverge
        let mut c = RngStream::new(123, 6);
        assert_ne!(
            sample_mlf_waiting(p, &mut a).to_bits(),
            sample_mlf_waiting(p, &mut c).to_bits()
        );
    }

    #[test]
    fn mlf_survival_matches_oracle() {
        // P(tau > 1) = E_0.9(-1) within 3 binomial SE at N = 1e5
        let p = MlfParams::new(0.9, 1.0).unwrap();
        let mut rng = RngStream::new(2024, 0);
        let n = 100_000;
        let t = 1.0;
        let survived = (0..n)
            .filter(|_| sample_mlf_waiting(p, &mut rng) > t)
            .count() as f64;
        let expected = mlf_series(0.9, -1.0, 1e-12).unwrap();
        let se = (expected * (1.0 - expected) / n as f64).sqrt();
        assert!(
            (survived / n as f64 - expected).abs() < 3.0 * se,
            "{} vs {expected} (se {se})",
            survived / n as f64
        );
    }

    #[test]
    fn mlf_median_matches_bisection_oracle() {
        // median solves E_{1/2}(-sqrt(t)) = 1/2
        let mut lo = 0.0;
        let mut hi = 10.0;
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if mlf_series(0.5, -(mid as f64).sqrt(), 1e-13).unwrap() > 0.5 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let median_oracle = 0.5 * (lo + hi);

        let p = MlfParams::new(0.5, 1.0).unwrap();
        let mut rng = RngStream::new(11, 0);
        let mut samples: Vec<f64> = (0..200_000).map(|_| sample_mlf_waiting(p, &mut rng)).collect();
        samples.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let median = samples[samples.len() / 2];
        assert!(
            (median / median_oracle - 1.0).abs() < 0.02,
            "median {median} vs {median_oracle}"
        );
    }

    #[test]
    fn wplus_survival_matches_quadrature() {
        let alpha = 0.7;
        let p = MlfParams::new(alpha, 1.0).unwrap();
        let sp = DensitySpec::new(p, DensityKind::WPlus).unwrap();
        let grid = QuadratureGrid::default_for(alpha);
        let mut rng = RngStream::new(99, 0);
        let n = 100_000;
        let samples: Vec<f64> = (0..n).map(|_| sample_wplus_waiting(p, &mut rng)).collect();
        let t = 1.0;
        let frac = samples.iter().filter(|&&x| x > t).count() as f64 / n as f64;
        let expected = survival_phi_wplus(&sp, t, grid).unwrap();
        let se = (expected * (1.0 - expected) / n as f64).sqrt();
        assert!((frac - expected).abs() < 3.0 * se, "{frac} vs {expected}");
        assert!(samples.iter().all(|&x| x > 0.0));
    }

    #[test]
    fn wplus_equals_mlf_at_alpha_half() {
        let p = MlfParams::new(0.5, 1.0).unwrap();
        let mut r1 = RngStream::new(5, 0);
        let mut r2 = RngStream::new(6, 0);
        let mut a: Vec<f64> = (0..100_000).map(|_| sample_wplus_waiting(p, &mut r1)).collect();
        let mut b: Vec<f64> = (0..100_000).map(|_| sample_mlf_waiting(p, &mut r2)).collect();
        let d = two_sample_ks(&mut a, &mut b);
        assert!(d < 0.01, "two-sample KS = {d}");
    }

    #[test]
    fn mlf_alpha_one_limit_matches_exponential() {
        let p = MlfParams::new(1.0, 1.0).unwrap();
        let mut r1 = RngStream::new(17, 0);
        let mut r2 = RngStream::new(18, 0);
        let mut a: Vec<f64> = (0..100_000).map(|_| sample_mlf_waiting(p, &mut r1)).collect();
        let mut b: Vec<f64> = (0..100_000)
            .map(|_| sample_exponential(1.0, &mut r2))
            .collect();
        let d = two_sample_ks(&mut a, &mut b);
        assert!(d < 0.01, "two-sample KS = {d}");
    }

    #[test]
    fn heavy_tail_exceeds_exponential() {
        let p = MlfParams::new(0.9, 1.0).unwrap();
        let mut rng = RngStream::new(31, 0);
        let n = 1_000_000;
        let tail = (0..n)
            .filter(|_| sample_mlf_waiting(p, &mut rng) > 10.0)
            .count() as f64
            / n as f64;
        let oracle = mlf(p, Sign::Minus, 10.0).unwrap();
        assert!(tail > 10.0 * (-10f64).exp(), "tail {tail}");
        assert!((tail - oracle).abs() < 4.0 * (oracle / n as f64).sqrt() + 1e-4);
    }
}
