use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{aggregate_statistics, electrostatic_coefficient, DeltaMeasurement, StatSummary, VoltagePair};
use crate::lifshitz::{CurveKind, ForceCurve};
use crate::{Error, Result};

/// Residual potentials in the bright and dark phases, V.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Residuals {
    pub v0_light: f64,
    pub v0_dark: f64,
}

fn electric_factor(pair: &VoltagePair, res: &Residuals) -> f64 {
    let dl = pair.v_light - res.v0_light;
    let dd = pair.v_dark - res.v0_dark;
    dl * dl - dd * dd
}

/// ΔF_d = ΔF_tot − c(z)[(V^l − V₀^l)² − (V − V₀)²].
pub fn invert_delta_total(meas: &DeltaMeasurement, residuals: &Residuals, radius: f64) -> Result<f64> {
    let c = electrostatic_coefficient(meas.z, radius)?;
    Ok(meas.delta_f_tot - c * electric_factor(&meas.pair, residuals))
}

/// `count` pairs spread symmetrically around the residual potentials, with
/// bright-phase offsets in [−span, span] and dark-phase offsets in
/// [−span/2, span/2] running the other way.
pub fn voltage_pairs(count: usize, residuals: &Residuals, span: f64) -> Vec<VoltagePair> {
    (0..count)
        .map(|k| {
            let u = if count > 1 {
                2.0 * k as f64 / (count - 1) as f64 - 1.0
            } else {
                0.0
            };
            VoltagePair {
                v_light: residuals.v0_light + span * u,
                v_dark: residuals.v0_dark - 0.5 * span * u,
            }
        })
        .collect()
}

/// ΔF_tot readings for every separation of `truth` and every pair, with
/// optional Gaussian reading noise. The draw order is z-major, pair-minor,
/// from a single ChaCha8 stream seeded by `seed`.
pub fn synthesize_measurements(
    truth: &ForceCurve,
    pairs: &[VoltagePair],
    residuals: &Residuals,
    noise_sd: f64,
    seed: u64,
) -> Result<Vec<DeltaMeasurement>> {
    if truth.kind() != CurveKind::ForceDifference {
        return Err(Error::invalid("synthetic measurements need a force-difference curve"));
    }
    let radius = truth
        .metadata()
        .radius
        .ok_or_else(|| Error::invalid("force-difference curve carries no sphere radius"))?;
    if !(noise_sd >= 0.0 && noise_sd.is_finite()) {
        return Err(Error::invalid(format!("noise_sd must be >= 0, got {noise_sd}")));
    }
    let noise = Normal::new(0.0, noise_sd).map_err(|e| Error::invalid(e.to_string()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(truth.points().len() * pairs.len());
    for &(z, fd) in truth.points() {
        let c = electrostatic_coefficient(z, radius)?;
        for pair in pairs {
            let mut tot = c * electric_factor(pair, residuals) + fd;
            if noise_sd > 0.0 {
                tot += noise.sample(&mut rng);
            }
            out.push(DeltaMeasurement::new(z, tot, *pair)?);
        }
    }
    Ok(out)
}

/// Invert every reading and aggregate those sharing a separation. Output is
/// sorted by z.
pub fn reduce_measurements(
    measurements: &[DeltaMeasurement],
    residuals: &Residuals,
    radius: f64,
    confidence: f64,
    systematic: f64,
) -> Result<Vec<StatSummary>> {
    let mut sorted = measurements.to_vec();
    sorted.sort_by(|a, b| a.z.total_cmp(&b.z));
    let groups: Vec<&[DeltaMeasurement]> = sorted.chunk_by(|a, b| a.z == b.z).collect();
    groups
        .par_iter()
        .map(|g| {
            let z = g[0].z;
            let values = g
                .iter()
                .map(|m| invert_delta_total(m, residuals, radius))
                .collect::<Result<Vec<_>>>()
                .map_err(|e| Error::AtSeparation { z, source: Box::new(e) })?;
            aggregate_statistics(z, &values, confidence, systematic)
                .map_err(|e| Error::AtSeparation { z, source: Box::new(e) })
        })
        .collect()
}
