use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Curvatures below this magnitude (N/V²) are reported as flat. Far below
/// |c(z)| for micrometre separations and a 100 μm sphere.
pub const DEFAULT_FLAT_THRESHOLD: f64 = 1e-15;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParabolaFit {
    /// Vertex abscissa, V.
    pub v_star: f64,
    /// Quadratic coefficient, N/V².
    pub curvature: f64,
    /// Value at the vertex, N.
    pub y_star: f64,
    pub flat: bool,
}

pub fn fit_parabola_extremum(samples: &[(f64, f64)]) -> Result<ParabolaFit> {
    fit_parabola_extremum_with(samples, DEFAULT_FLAT_THRESHOLD)
}

/// Least-squares y = a + b V + k V², solved in centred and scaled
/// coordinates so the normal equations stay well conditioned.
pub fn fit_parabola_extremum_with(samples: &[(f64, f64)], flat_threshold: f64) -> Result<ParabolaFit> {
    if samples.iter().any(|(v, y)| !(v.is_finite() && y.is_finite())) {
        return Err(Error::Fit("non-finite sample".into()));
    }
    let mut vs: Vec<f64> = samples.iter().map(|s| s.0).collect();
    vs.sort_by(f64::total_cmp);
    vs.dedup();
    if vs.len() < 3 {
        return Err(Error::Fit(format!(
            "parabola fit needs at least 3 distinct voltages, got {}",
            vs.len()
        )));
    }
    let n = samples.len();
    let center = samples.iter().map(|s| s.0).sum::<f64>() / n as f64;
    let scale = samples.iter().map(|s| (s.0 - center).abs()).fold(0.0, f64::max);
    let y_scale = samples.iter().map(|s| s.1.abs()).fold(0.0, f64::max);
    let y_scale = if y_scale > 0.0 { y_scale } else { 1.0 };

    let a = DMatrix::from_fn(n, 3, |i, j| ((samples[i].0 - center) / scale).powi(j as i32));
    let y = DVector::from_fn(n, |i, _| samples[i].1 / y_scale);
    let coef = a
        .svd(true, true)
        .solve(&y, 1e-14)
        .map_err(|e| Error::Fit(format!("parabola least squares failed: {e}")))?;
    let (c0, c1, c2) = (coef[0] * y_scale, coef[1] * y_scale, coef[2] * y_scale);

    if coef[2].abs() <= 1e-12 * (coef[0].abs() + coef[1].abs() + coef[2].abs()) {
        return Err(Error::Fit("samples are linear to rounding; no extremum".into()));
    }
    let curvature = c2 / (scale * scale);
    let flat = !(curvature.abs() >= flat_threshold);
    if flat {
        log::warn!("parabola curvature {curvature:e} N/V² is below the flatness threshold {flat_threshold:e}");
    }
    let x_star = -c1 / (2.0 * c2);
    Ok(ParabolaFit {
        v_star: center + scale * x_star,
        curvature,
        y_star: c0 - c1 * c1 / (4.0 * c2),
        flat,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::electrostatic_coefficient;
    use proptest::prelude::*;

    fn sweep(f: impl Fn(f64) -> f64, lo: f64, hi: f64, n: usize) -> Vec<(f64, f64)> {
        (0..n)
            .map(|i| {
                let v = lo + (hi - lo) * i as f64 / (n - 1) as f64;
                (v, f(v))
            })
            .collect()
    }

    #[test]
    fn exact_quadratic() {
        let s = sweep(|v| -(v - 0.3) * (v - 0.3) + 1.0, -1.0, 1.0, 9);
        let fit = fit_parabola_extremum(&s).unwrap();
        assert!((fit.v_star - 0.3).abs() < 1e-13);
        assert!((fit.curvature + 1.0).abs() < 1e-13);
        assert!((fit.y_star - 1.0).abs() < 1e-13);
        assert!(!fit.flat);
    }

    #[test]
    fn electrostatic_sweep_recovers_residual_potential() {
        let c = electrostatic_coefficient(150e-9, 98.9e-6).unwrap();
        let v0 = -0.303;
        let s = sweep(|v| c * (v - v0) * (v - v0) - 2e-12, -0.8, 0.2, 21);
        let fit = fit_parabola_extremum(&s).unwrap();
        assert!((fit.v_star - v0).abs() < 1e-9 * v0.abs(), "{}", fit.v_star);
        // c < 0: a maximum.
        assert!(fit.curvature < 0.0);
        assert!((fit.curvature / c - 1.0).abs() < 1e-9);
    }

    #[test]
    fn too_few_abscissae() {
        let s = [(0.0, 1.0), (1.0, 2.0), (1.0, 2.5), (0.0, 0.9)];
        assert!(matches!(fit_parabola_extremum(&s), Err(Error::Fit(_))));
    }

    #[test]
    fn flat_warning() {
        let s = sweep(|v| 1e-20 * v * v + 1e-12 * v, -1.0, 1.0, 5);
        let fit = fit_parabola_extremum(&s).unwrap();
        assert!(fit.flat);
        let fit = fit_parabola_extremum_with(&s, 0.0).unwrap();
        assert!(!fit.flat);
        let line = sweep(|v| 2.0 * v, -1.0, 1.0, 5);
        assert!(matches!(fit_parabola_extremum(&line), Err(Error::Fit(_))));
    }

    proptest! {
        #[test]
        fn vertex_invariant_under_shift_and_scale(
            v0 in -1.0f64..1.0,
            k in prop_oneof![-10.0f64..-0.1, 0.1f64..10.0],
            shift in -100.0f64..100.0,
            gain in 1e-3f64..1e3,
        ) {
            let base = sweep(|v| k * (v - v0) * (v - v0), -2.0, 2.0, 11);
            let fit = fit_parabola_extremum_with(&base, 0.0).unwrap();
            let shifted: Vec<_> = base.iter().map(|&(v, y)| (v, y + shift)).collect();
            let scaled: Vec<_> = base.iter().map(|&(v, y)| (v, gain * y)).collect();
            let fs = fit_parabola_extremum_with(&shifted, 0.0).unwrap();
            let fg = fit_parabola_extremum_with(&scaled, 0.0).unwrap();
            prop_assert!((fs.v_star - fit.v_star).abs() < 1e-9);
            prop_assert!((fg.v_star - fit.v_star).abs() < 1e-9);
            prop_assert!((fg.curvature / fit.curvature - gain).abs() < 1e-9 * gain);
        }
    }
}
