//! Reduction of lock-in force-difference measurements to the dispersion
//! force difference ΔF_d(z): electrostatic calibration, residual potentials,
//! removal of the electric term, and Student-t error bars.
//!
//! The electric force between sphere and plate is F_e = c(z)(V − V₀)² with
//! c(z) < 0. In the bright/dark modulation scheme the measured difference is
//!
//! ΔF_tot(z) = c(z)[(V^l − V₀^l)² − (V − V₀)²] + ΔF_d(z).

mod calibration;
mod electrostatics;
mod io;
mod parabola;
mod reduction;
mod stats;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub use calibration::{
    fit_deflection_calibration, synthesize_calibration, CalibrationFit, CalibrationPoint, CalibrationUncertainty,
};
pub use electrostatics::{actual_separation, electrostatic_coefficient, proximity_coefficient};
pub use io::{
    read_calibration_csv, read_measurements_csv, write_calibration_csv, write_measurements_csv, write_summaries_csv,
};
pub use parabola::{fit_parabola_extremum, fit_parabola_extremum_with, ParabolaFit, DEFAULT_FLAT_THRESHOLD};
pub use reduction::{invert_delta_total, reduce_measurements, synthesize_measurements, voltage_pairs, Residuals};
pub use stats::{aggregate_statistics, combine_errors, student_t_quantile};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ElectrostaticCalib {
    /// m per unit deflection signal.
    pub deflection_coeff_m: f64,
    /// Separation at piezo zero with an undeflected cantilever, m.
    pub contact_separation_z0: f64,
    #[serde(rename = "residual_potential_V0")]
    pub residual_potential_v0: f64,
    /// N per unit deflection signal.
    pub force_per_signal: f64,
}

impl ElectrostaticCalib {
    pub fn new(
        deflection_coeff_m: f64,
        contact_separation_z0: f64,
        residual_potential_v0: f64,
        force_per_signal: f64,
    ) -> Result<Self> {
        let c = Self {
            deflection_coeff_m,
            contact_separation_z0,
            residual_potential_v0,
            force_per_signal,
        };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("deflection_coeff_m", self.deflection_coeff_m),
            ("contact_separation_z0", self.contact_separation_z0),
            ("force_per_signal", self.force_per_signal),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::invalid(format!("{name} must be > 0, got {v}")));
            }
        }
        if !self.residual_potential_v0.is_finite() {
            return Err(Error::invalid("residual potential must be finite"));
        }
        Ok(())
    }
}

/// Voltages applied to the plate during the bright (`v_light`) and dark phases.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VoltagePair {
    pub v_light: f64,
    pub v_dark: f64,
}

impl VoltagePair {
    pub fn new(v_light: f64, v_dark: f64) -> Result<Self> {
        if !(v_light.is_finite() && v_dark.is_finite()) {
            return Err(Error::invalid("voltages must be finite"));
        }
        Ok(Self { v_light, v_dark })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeltaMeasurement {
    /// m.
    pub z: f64,
    /// Total (electric plus dispersion) force difference, N.
    pub delta_f_tot: f64,
    pub pair: VoltagePair,
}

impl DeltaMeasurement {
    pub fn new(z: f64, delta_f_tot: f64, pair: VoltagePair) -> Result<Self> {
        if !(z.is_finite() && z > 0.0) {
            return Err(Error::invalid(format!("separation must be > 0, got {z}")));
        }
        if !delta_f_tot.is_finite() {
            return Err(Error::invalid("force difference must be finite"));
        }
        VoltagePair::new(pair.v_light, pair.v_dark)?;
        Ok(Self { z, delta_f_tot, pair })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatSummary {
    pub z: f64,
    pub mean_delta_fd: f64,
    /// s(z), the sample standard deviation of the mean, N. The traditional
    /// name is kept even though the unit is that of a force.
    pub variance_of_mean: f64,
    pub dof: usize,
    pub t_factor: f64,
    pub random_error: f64,
    pub systematic_error: f64,
    pub total_error: f64,
    pub confidence: f64,
}
