use nalgebra::{DMatrix, DVector, Matrix4, Vector4};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use super::{actual_separation, electrostatic_coefficient, ElectrostaticCalib};
use crate::{Error, Result};

/// One reading of an electrostatic force-distance curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CalibrationPoint {
    #[serde(rename = "z_piezo_m")]
    pub z_piezo: f64,
    /// Cantilever deflection signal used to correct the separation.
    #[serde(rename = "s_def_units")]
    pub s_def: f64,
    /// Deflection signal interpreted as force, F = force_per_signal · signal.
    #[serde(rename = "force_signal_units")]
    pub force_signal: f64,
    #[serde(rename = "v_applied_V")]
    pub voltage: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CalibrationUncertainty {
    pub deflection_coeff_m: f64,
    pub contact_separation_z0: f64,
    #[serde(rename = "residual_potential_V0")]
    pub residual_potential_v0: f64,
    pub force_per_signal: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CalibrationFit {
    pub calib: ElectrostaticCalib,
    /// One-sigma standard errors from s²(JᵀJ)⁻¹.
    pub std_errors: CalibrationUncertainty,
    pub iterations: usize,
    /// Residual sum of squares, signal units².
    pub rss: f64,
    pub points: usize,
}

// Working units: nm/unit, nm, V, nN/unit.
const SCALE: [f64; 4] = [1e-9, 1e-9, 1.0, 1e-9];
const STEP_TOL: f64 = 1e-10;
const FD_STEP: f64 = 1e-6;
const MAX_ITER: usize = 500;

fn unscale(theta: &Vector4<f64>) -> ElectrostaticCalib {
    ElectrostaticCalib {
        deflection_coeff_m: theta[0] * SCALE[0],
        contact_separation_z0: theta[1] * SCALE[1],
        residual_potential_v0: theta[2] * SCALE[2],
        force_per_signal: theta[3] * SCALE[3],
    }
}

fn predicted_signal(p: &CalibrationPoint, calib: &ElectrostaticCalib, radius: f64) -> Result<f64> {
    let z = actual_separation(p.z_piezo, p.s_def, calib)?;
    let dv = p.voltage - calib.residual_potential_v0;
    Ok(electrostatic_coefficient(z, radius)? * dv * dv / calib.force_per_signal)
}

fn residuals(points: &[CalibrationPoint], theta: &Vector4<f64>, radius: f64) -> Option<DVector<f64>> {
    let calib = unscale(theta);
    if !(calib.force_per_signal > 0.0) {
        return None;
    }
    let mut r = DVector::zeros(points.len());
    for (i, p) in points.iter().enumerate() {
        r[i] = predicted_signal(p, &calib, radius).ok()? - p.force_signal;
    }
    Some(r)
}

fn jacobian(points: &[CalibrationPoint], theta: &Vector4<f64>, radius: f64) -> Result<DMatrix<f64>> {
    let mut j = DMatrix::zeros(points.len(), 4);
    for k in 0..4 {
        let h = if theta[k] != 0.0 {
            FD_STEP * theta[k].abs()
        } else {
            FD_STEP
        };
        let (mut up, mut dn) = (*theta, *theta);
        up[k] += h;
        dn[k] -= h;
        let (ru, rd) = match (residuals(points, &up, radius), residuals(points, &dn, radius)) {
            (Some(a), Some(b)) => (a, b),
            _ => {
                return Err(Error::Fit(format!(
                    "model undefined next to parameters {:?}",
                    unscale(theta)
                )))
            }
        };
        j.set_column(k, &((ru - rd) / (2.0 * h)));
    }
    Ok(j)
}

// m = 0, a scan over z₀, then the linear model signal = c·(A V² + B V + D)
// gives 1/k = A and V₀ = −B/(2A).
fn initial_guess(points: &[CalibrationPoint], radius: f64) -> Result<Vector4<f64>> {
    let zp_min = points.iter().map(|p| p.z_piezo).fold(f64::INFINITY, f64::min);
    let mut best: Option<(f64, Vector4<f64>)> = None;
    for i in 0..=80 {
        let z0 = 1e-9 * 10f64.powf(4.0 * i as f64 / 80.0);
        if zp_min + z0 <= 0.0 {
            continue;
        }
        let mut a = DMatrix::zeros(points.len(), 3);
        let mut y = DVector::zeros(points.len());
        let mut ok = true;
        for (r, p) in points.iter().enumerate() {
            let Ok(c) = electrostatic_coefficient(p.z_piezo + z0, radius) else {
                ok = false;
                break;
            };
            a[(r, 0)] = c * p.voltage * p.voltage;
            a[(r, 1)] = c * p.voltage;
            a[(r, 2)] = c;
            y[r] = p.force_signal;
        }
        if !ok {
            continue;
        }
        // Column equilibration before the SVD solve.
        let norms: Vec<f64> = (0..3).map(|k| a.column(k).norm().max(f64::MIN_POSITIVE)).collect();
        for (k, n) in norms.iter().enumerate() {
            a.column_mut(k).scale_mut(1.0 / n);
        }
        let Ok(sol) = a.clone().svd(true, true).solve(&y, 1e-12) else {
            continue;
        };
        let coef: Vec<f64> = (0..3).map(|k| sol[k] / norms[k]).collect();
        if !(coef[0] > 0.0) {
            continue;
        }
        let rss = (&a * &sol - &y).norm_squared();
        let v0 = -coef[1] / (2.0 * coef[0]);
        let theta = Vector4::new(0.0, z0 / SCALE[1], v0, 1.0 / coef[0] / SCALE[3]);
        if best.as_ref().is_none_or(|(b, _)| rss < *b) {
            best = Some((rss, theta));
        }
    }
    best.map(|b| b.1)
        .ok_or_else(|| Error::Fit("no starting point found; the data do not look electrostatic".into()))
}

/// Least-squares estimate of (m, z₀, V₀, force_per_signal) from
/// force-distance curves at several applied voltages, using the model
/// signal = c(z)(V − V₀)²/force_per_signal with z = z_piezo + m·s_def + z₀.
pub fn fit_deflection_calibration(points: &[CalibrationPoint], radius: f64) -> Result<CalibrationFit> {
    if points
        .iter()
        .any(|p| !(p.z_piezo.is_finite() && p.s_def.is_finite() && p.force_signal.is_finite() && p.voltage.is_finite()))
    {
        return Err(Error::Fit("non-finite calibration reading".into()));
    }
    let mut volts: Vec<f64> = points.iter().map(|p| p.voltage).collect();
    volts.sort_by(f64::total_cmp);
    volts.dedup();
    if volts.len() < 3 {
        return Err(Error::Fit(format!(
            "calibration needs at least 3 distinct applied voltages, got {}",
            volts.len()
        )));
    }
    if points.len() <= 4 {
        return Err(Error::Fit("calibration needs more than 4 readings".into()));
    }
    if points.iter().all(|p| p.force_signal == 0.0) {
        return Err(Error::Fit("no electrostatic signal in the calibration data".into()));
    }

    let mut theta = initial_guess(points, radius)?;
    let mut r = residuals(points, &theta, radius).ok_or_else(|| Error::Fit("initial guess is infeasible".into()))?;
    let mut rss = r.norm_squared();
    let mut lambda = 1e-3;
    let mut converged = false;
    let mut iterations = 0;
    'outer: while iterations < MAX_ITER {
        iterations += 1;
        let j = jacobian(points, &theta, radius)?;
        let jtj: Matrix4<f64> = (j.transpose() * &j).fixed_view::<4, 4>(0, 0).into_owned();
        let g: Vector4<f64> = (j.transpose() * &r).fixed_view::<4, 1>(0, 0).into_owned();
        loop {
            let mut m = jtj;
            for k in 0..4 {
                m[(k, k)] += lambda * jtj[(k, k)].max(1e-30);
            }
            let Some(chol) = m.cholesky() else {
                lambda *= 10.0;
                if lambda > 1e30 {
                    break 'outer;
                }
                continue;
            };
            let step = -chol.solve(&g);
            let trial = theta + step;
            let small = step.norm() < STEP_TOL;
            match residuals(points, &trial, radius) {
                Some(rt) if rt.norm_squared() <= rss => {
                    theta = trial;
                    rss = rt.norm_squared();
                    r = rt;
                    lambda = (lambda * 0.1).max(1e-15);
                    if small {
                        converged = true;
                        break 'outer;
                    }
                    break;
                }
                _ => {
                    if small {
                        converged = true;
                        break 'outer;
                    }
                    lambda *= 10.0;
                    if lambda > 1e30 {
                        break 'outer;
                    }
                }
            }
        }
    }
    if !converged {
        return Err(Error::Fit(format!(
            "calibration fit did not converge after {iterations} iterations \
             (rss {rss:e}, damping {lambda:e}, parameters {:?})",
            unscale(&theta)
        )));
    }

    let j = jacobian(points, &theta, radius)?;
    let jtj: Matrix4<f64> = (j.transpose() * &j).fixed_view::<4, 4>(0, 0).into_owned();
    let d: Vector4<f64> = jtj.diagonal().map(|v| v.sqrt());
    if d.iter().any(|&v| !(v > 0.0)) {
        return Err(Error::Fit(
            "rank-deficient design: a parameter does not affect the model".into(),
        ));
    }
    let corr = Matrix4::from_fn(|a, b| jtj[(a, b)] / (d[a] * d[b]));
    let eig = corr.symmetric_eigenvalues();
    let (lo, hi) = (eig.min(), eig.max());
    if !(lo > 1e-12 * hi) {
        return Err(Error::Fit(format!(
            "rank-deficient design (normalised eigenvalue ratio {:e})",
            lo / hi
        )));
    }
    let inv = corr
        .try_inverse()
        .ok_or_else(|| Error::Fit("singular normal matrix".into()))?;
    let sigma2 = rss / (points.len() - 4) as f64;
    let se = |k: usize| (sigma2 * inv[(k, k)]).sqrt() / d[k] * SCALE[k];

    let calib = unscale(&theta);
    calib
        .validate()
        .map_err(|e| Error::Fit(format!("fitted parameters are unphysical: {e}")))?;
    Ok(CalibrationFit {
        calib,
        std_errors: CalibrationUncertainty {
            deflection_coeff_m: se(0),
            contact_separation_z0: se(1),
            residual_potential_v0: se(2),
            force_per_signal: se(3),
        },
        iterations,
        rss,
        points: points.len(),
    })
}

/// Readings for every (voltage, z_piezo) combination. The deflection s_def
/// is solved self-consistently, S = c(z_piezo + mS + z₀)(V − V₀)²/k; the
/// optional Gaussian noise is added to `force_signal` only.
pub fn synthesize_calibration(
    calib: &ElectrostaticCalib,
    radius: f64,
    z_piezo: &[f64],
    voltages: &[f64],
    noise_sd: f64,
    seed: u64,
) -> Result<Vec<CalibrationPoint>> {
    calib.validate()?;
    let noise = Normal::new(0.0, noise_sd).map_err(|e| Error::invalid(e.to_string()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(z_piezo.len() * voltages.len());
    for &v in voltages {
        for &zp in z_piezo {
            let probe = |s: f64| {
                predicted_signal(
                    &CalibrationPoint {
                        z_piezo: zp,
                        s_def: s,
                        force_signal: 0.0,
                        voltage: v,
                    },
                    calib,
                    radius,
                )
            };
            let mut s = 0.0;
            let mut settled = false;
            for _ in 0..200 {
                let next = probe(s)?;
                let done = (next - s).abs() <= 4.0 * f64::EPSILON * next.abs();
                s = next;
                if done {
                    settled = true;
                    break;
                }
            }
            if !settled {
                return Err(Error::Fit(format!(
                    "deflection did not settle at z_piezo = {zp:e} m, V = {v} V (snap-in?)"
                )));
            }
            let force_signal = if noise_sd > 0.0 { s + noise.sample(&mut rng) } else { s };
            out.push(CalibrationPoint {
                z_piezo: zp,
                s_def: s,
                force_signal,
                voltage: v,
            });
        }
    }
    Ok(out)
}
