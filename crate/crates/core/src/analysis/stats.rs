use statrs::distribution::{ContinuousCDF, StudentsT};

use super::StatSummary;
use crate::{Error, Result};

/// Quantile t_p(f) of Student's distribution with `dof` degrees of freedom,
/// by inversion of the regularised incomplete beta function.
pub fn student_t_quantile(p: f64, dof: usize) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::Statistics(format!("probability must lie in (0, 1), got {p}")));
    }
    if dof == 0 {
        return Err(Error::Statistics(
            "Student-t needs at least one degree of freedom".into(),
        ));
    }
    let dist = StudentsT::new(0.0, 1.0, dof as f64).map_err(|e| Error::Statistics(e.to_string()))?;
    Ok(dist.inverse_cdf(p))
}

/// Quadrature sum √(random² + systematic²). Both errors must be quoted at
/// the same confidence level.
pub fn combine_errors(random: f64, systematic: f64) -> Result<f64> {
    if !(random >= 0.0 && systematic >= 0.0) {
        return Err(Error::Statistics(format!(
            "errors must be >= 0, got {random:e} and {systematic:e}"
        )));
    }
    Ok(random.hypot(systematic))
}

/// Mean of equally weighted repeats at one separation, with the random error
/// s·t_p(N − 1) at p = (1 + β)/2 and the systematic error added in quadrature.
pub fn aggregate_statistics(z: f64, values: &[f64], confidence: f64, systematic: f64) -> Result<StatSummary> {
    if values.len() < 2 {
        return Err(Error::Statistics(format!(
            "need at least 2 values, got {}",
            values.len()
        )));
    }
    if !(confidence > 0.0 && confidence < 1.0) {
        return Err(Error::Statistics(format!(
            "confidence must lie in (0, 1), got {confidence}"
        )));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::Statistics("non-finite value".into()));
    }
    let n = values.len();
    // Sorting makes the sums independent of input order.
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    // Shifted by a sample value so identical inputs give an exact mean and s = 0.
    let pivot = sorted[n / 2];
    let mean = pivot + sorted.iter().map(|v| v - pivot).sum::<f64>() / n as f64;
    let ss: f64 = sorted.iter().map(|v| (v - mean) * (v - mean)).sum();
    let s = (ss / ((n - 1) * n) as f64).sqrt();
    let dof = n - 1;
    let t_factor = student_t_quantile(0.5 * (1.0 + confidence), dof)?;
    let random_error = s * t_factor;
    let total_error = combine_errors(random_error, systematic)?;
    Ok(StatSummary {
        z,
        mean_delta_fd: mean,
        variance_of_mean: s,
        dof,
        t_factor,
        random_error,
        systematic_error: systematic,
        total_error,
        confidence,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, Normal};

    use crate::quadrature::{integrate, QuadOptions};

    // Student-t density integrated numerically, then bisected.
    fn t_quantile_oracle(p: f64, f: f64) -> f64 {
        let ln_norm = statrs::function::gamma::ln_gamma((f + 1.0) / 2.0)
            - statrs::function::gamma::ln_gamma(f / 2.0)
            - 0.5 * (f * std::f64::consts::PI).ln();
        let pdf = |t: f64| (ln_norm - (f + 1.0) / 2.0 * (1.0 + t * t / f).ln()).exp();
        let cdf = |t: f64| 0.5 + integrate(pdf, 0.0, t, QuadOptions::rel(1e-13)).value;
        let (mut lo, mut hi) = (0.0, 50.0);
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if cdf(mid) < p {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn quantiles_match_numerical_inversion() {
        for (p, f) in [(0.975, 40), (0.975, 1), (0.95, 10), (0.995, 5)] {
            let t = student_t_quantile(p, f).unwrap();
            let o = t_quantile_oracle(p, f as f64);
            assert!((t - o).abs() < 1e-8, "p={p} f={f}: {t} vs {o}");
        }
        assert!((student_t_quantile(0.975, 40).unwrap() - 2.021_075).abs() < 1e-6);
        assert!((student_t_quantile(0.975, 1).unwrap() - 12.706_205).abs() < 1e-5);
        assert!(student_t_quantile(1.0, 4).is_err());
        assert!(student_t_quantile(0.9, 0).is_err());
    }

    #[test]
    fn quadrature_combination() {
        let tot = combine_errors(0.34e-12, 0.09e-12).unwrap();
        assert!((tot - 0.352e-12).abs() < 0.001e-12);
        assert!(tot / 0.34e-12 - 1.0 < 0.04);
        assert_eq!(combine_errors(3.0, 0.0).unwrap(), 3.0);
        assert_eq!(combine_errors(0.2, 0.7).unwrap(), combine_errors(0.7, 0.2).unwrap());
        assert!(combine_errors(-1.0, 0.0).is_err());
    }

    #[test]
    fn identical_values() {
        let s = aggregate_statistics(1e-7, &[-2e-12; 41], 0.95, 0.09e-12).unwrap();
        assert_eq!(s.variance_of_mean, 0.0);
        assert_eq!(s.random_error, 0.0);
        assert_eq!(s.total_error, 0.09e-12);
        assert_eq!(s.dof, 40);
    }

    #[test]
    fn random_error_target() {
        // Rescale Gaussian draws so that s·t hits 0.34 pN exactly.
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let normal = Normal::new(0.0, 1.0).unwrap();
        let raw: Vec<f64> = (0..41).map(|_| normal.sample(&mut rng)).collect();
        let probe = aggregate_statistics(1e-7, &raw, 0.95, 0.0).unwrap();
        let gain = 0.34e-12 / probe.random_error;
        let vals: Vec<f64> = raw.iter().map(|v| -3.4e-12 + gain * v).collect();
        let s = aggregate_statistics(1e-7, &vals, 0.95, 0.09e-12).unwrap();
        assert!((s.random_error - 0.34e-12).abs() < 1e-24);
        assert!(
            s.total_error > 0.34e-12 && s.total_error < 0.355e-12,
            "{:e}",
            s.total_error
        );
        assert!(s.total_error >= 0.99 * s.random_error.max(s.systematic_error));
    }

    #[test]
    fn one_over_root_n() {
        let normal = Normal::new(0.0, 1.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let reps = 400;
        let mut mean_s = Vec::new();
        for n in [10usize, 40, 160] {
            let mut acc = 0.0;
            for _ in 0..reps {
                let v: Vec<f64> = (0..n).map(|_| normal.sample(&mut rng)).collect();
                acc += aggregate_statistics(0.0, &v, 0.95, 0.0).unwrap().variance_of_mean;
            }
            mean_s.push(acc / reps as f64 * (n as f64).sqrt());
        }
        // E[s]·√N → σ up to the c4 bias, which is below 3% for N ≥ 10.
        for m in mean_s {
            assert!((m - 1.0).abs() < 0.05, "{m}");
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            aggregate_statistics(0.0, &[1.0], 0.95, 0.0),
            Err(Error::Statistics(_))
        ));
        assert!(aggregate_statistics(0.0, &[1.0, 2.0], 1.0, 0.0).is_err());
        assert!(aggregate_statistics(0.0, &[1.0, 2.0], 0.95, -1.0).is_err());
    }

    proptest! {
        #[test]
        fn permutation_invariant(mut v in proptest::collection::vec(-1e-11f64..1e-11, 2..60), seed in any::<u64>()) {
            let a = aggregate_statistics(1e-7, &v, 0.95, 1e-13).unwrap();
            use rand::seq::SliceRandom;
            v.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
            let b = aggregate_statistics(1e-7, &v, 0.95, 1e-13).unwrap();
            prop_assert_eq!(a, b);
        }
    }
}
