//! Finite-temperature Lifshitz interaction between two half-spaces and its
//! proximity-force mapping to a sphere above a plate.
//!
//! The free energy per unit area is
//!
//! E(z, T) = (k_B T / 2π) Σ′_j ∫₀^∞ k⊥ dk⊥ Σ_{TM,TE} ln[1 − r⁽¹⁾ r⁽²⁾ e^{−2 q_j z}],
//!
//! with ξ_j = 2π k_B T j / ħ, q_j² = k⊥² + ξ_j²/c², and the j = 0 term at half
//! weight. The k⊥ integral is done in y = 2 q_j z.

mod curve;
mod energy;
mod fresnel;
mod polylog;

use serde::{Deserialize, Serialize};

use crate::constants::{HBAR, K_B};
use crate::materials::PermittivityModel;
use crate::{Error, Result};

pub use curve::{force_curve, force_values, CurveKind, CurveMetadata, CurveRequest, ForceCurve};
pub use energy::{
    force_difference, free_energy_breakdown, free_energy_per_area, sphere_plate_force, FreeEnergyBreakdown,
    MatsubaraTerm, Spectrum,
};
pub use fresnel::{fresnel_coefficients, zero_frequency_coefficients};
pub use polylog::{ideal_metal_reference, ideal_metal_zero_temperature, li2_exp_neg, li3_exp_neg, polylog_series};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LifshitzConfig {
    /// Temperature, K.
    pub temperature: f64,
    /// Stop once three consecutive Matsubara terms are below this fraction of the running sum.
    pub matsubara_rel_tol: f64,
    pub matsubara_max_terms: usize,
    /// Relative tolerance of each y-integral.
    pub quad_rel_tol: f64,
    /// Length of the y-integration window above its lower limit.
    pub y_cutoff: f64,
}

impl Default for LifshitzConfig {
    fn default() -> Self {
        Self {
            temperature: 300.0,
            matsubara_rel_tol: 1e-9,
            matsubara_max_terms: 100_000,
            quad_rel_tol: 1e-8,
            y_cutoff: 60.0,
        }
    }
}

impl LifshitzConfig {
    pub fn at_temperature(temperature: f64) -> Self {
        Self {
            temperature,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.temperature.is_finite() && self.temperature > 0.0) {
            return Err(Error::Configuration(format!(
                "temperature must be > 0 K, got {}",
                self.temperature
            )));
        }
        for (name, tol) in [
            ("matsubara_rel_tol", self.matsubara_rel_tol),
            ("quad_rel_tol", self.quad_rel_tol),
        ] {
            if !(tol > 0.0 && tol <= 1e-2) {
                return Err(Error::Configuration(format!("{name} must lie in (0, 1e-2], got {tol}")));
            }
        }
        if self.matsubara_max_terms < 100 {
            return Err(Error::Configuration("matsubara_max_terms must be >= 100".into()));
        }
        if !(self.y_cutoff >= 40.0) {
            return Err(Error::Configuration(format!(
                "y_cutoff must be >= 40, got {}",
                self.y_cutoff
            )));
        }
        Ok(())
    }
}

/// ξ_j = 2π k_B T j / ħ.
pub fn matsubara_frequency(j: usize, temperature: f64) -> Result<f64> {
    if !(temperature.is_finite() && temperature > 0.0) {
        return Err(Error::domain(format!("temperature must be > 0, got {temperature}")));
    }
    Ok(2.0 * std::f64::consts::PI * K_B * temperature * j as f64 / HBAR)
}

/// One side of the gap.
#[derive(Debug, Clone, PartialEq)]
pub struct HalfSpace {
    pub model: PermittivityModel,
    /// Replaces the class-derived r_TE(0) when set.
    pub zero_frequency_te: Option<f64>,
}

impl HalfSpace {
    pub fn new(model: PermittivityModel) -> Self {
        Self {
            model,
            zero_frequency_te: None,
        }
    }

    pub fn with_zero_frequency_te(mut self, r_te0: f64) -> Self {
        self.zero_frequency_te = Some(r_te0);
        self
    }

    pub fn label(&self) -> &str {
        self.model.label()
    }
}

impl From<PermittivityModel> for HalfSpace {
    fn from(model: PermittivityModel) -> Self {
        Self::new(model)
    }
}

/// Largest separation-to-radius ratio treated without a warning.
pub const PFA_RATIO_LIMIT: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpherePlateGeometry {
    /// Sphere radius, m.
    pub radius: f64,
    /// Closest sphere-plate distance, m.
    pub separation: f64,
}

impl SpherePlateGeometry {
    pub fn new(radius: f64, separation: f64) -> Result<Self> {
        if !(radius.is_finite() && radius > 0.0) {
            return Err(Error::Geometry(format!("radius must be > 0, got {radius}")));
        }
        if !(separation.is_finite() && separation > 0.0) {
            return Err(Error::Geometry(format!("separation must be > 0, got {separation}")));
        }
        if separation / radius >= PFA_RATIO_LIMIT {
            log::warn!(
                "z/R = {:.3} exceeds {PFA_RATIO_LIMIT}; proximity force approximation is unreliable",
                separation / radius
            );
        }
        Ok(Self { radius, separation })
    }
}
