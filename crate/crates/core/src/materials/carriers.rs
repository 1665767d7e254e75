use serde::{Deserialize, Serialize};

use crate::constants::{EPS_0, E_CHARGE, HBAR, M_E};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CarrierSpec {
    /// Carriers per m³.
    pub density: f64,
    /// Effective mass in units of the free electron mass.
    pub mass_ratio: f64,
}

/// Steady-state photo-excitation of a membrane by a Gaussian beam.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IlluminationSpec {
    /// Absorbed power within the beam spot, W.
    pub absorbed_power: f64,
    /// Carrier lifetime, s.
    pub lifetime: f64,
    /// Photon angular frequency, rad/s.
    pub photon_omega: f64,
    /// Membrane thickness, m.
    pub thickness: f64,
    /// Gaussian beam width, m.
    pub gauss_width: f64,
}

/// ω_p = √(n e² / (m* ε₀)).
pub fn plasma_frequency(spec: &CarrierSpec) -> Result<f64> {
    if !(spec.density.is_finite() && spec.density > 0.0) {
        return Err(Error::domain(format!(
            "carrier density must be > 0, got {}",
            spec.density
        )));
    }
    if !(spec.mass_ratio.is_finite() && spec.mass_ratio > 0.0) {
        return Err(Error::domain(format!(
            "mass ratio must be > 0, got {}",
            spec.mass_ratio
        )));
    }
    let m = spec.mass_ratio * M_E;
    Ok((spec.density * E_CHARGE * E_CHARGE / (m * EPS_0)).sqrt())
}

/// n = 4 P τ / (ħ ω d π w²): carriers generated in a cylinder of diameter w
/// through the membrane.
pub fn carrier_density_from_illumination(spec: &IlluminationSpec) -> Result<f64> {
    let fields = [
        ("absorbed_power", spec.absorbed_power),
        ("lifetime", spec.lifetime),
        ("photon_omega", spec.photon_omega),
        ("thickness", spec.thickness),
        ("gauss_width", spec.gauss_width),
    ];
    for (name, v) in fields {
        if !(v.is_finite() && v > 0.0) {
            return Err(Error::domain(format!("{name} must be > 0, got {v}")));
        }
    }
    let w2 = spec.gauss_width * spec.gauss_width;
    Ok(4.0 * spec.absorbed_power * spec.lifetime
        / (HBAR * spec.photon_omega * spec.thickness * std::f64::consts::PI * w2))
}
