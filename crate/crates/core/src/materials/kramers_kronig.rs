//! Kramers-Kronig map from tabulated absorption to ε(iξ):
//!
//! ε(iξ) = 1 + (2/π) ∫₀^∞ ω ε₂(ω) / (ω² + ξ²) dω
//!
//! Inside the table ε₂ is linearly interpolated. Below the first row the
//! integrand follows a configurable [`LowFrequencyTail`]; above the last row ε₂
//! is continued as ε₂(ω_max)·(ω_max/ω)³ and integrated in closed form.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{DrudeParams, OpticalDataTable};
use crate::quadrature::{integrate, integrate_with_breaks, QuadOptions};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LowFrequencyTail {
    /// ε₂ held at its lowest tabulated value (dielectrics).
    HoldLowest,
    /// ε₂ = ω_p² γ / [ω (ω² + γ²)] (metals).
    Drude(DrudeParams),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExtrapolationPolicy {
    pub low: LowFrequencyTail,
    pub quad_rel_tol: f64,
}

impl Default for ExtrapolationPolicy {
    fn default() -> Self {
        Self {
            low: LowFrequencyTail::HoldLowest,
            quad_rel_tol: 1e-8,
        }
    }
}

impl ExtrapolationPolicy {
    pub fn drude(params: DrudeParams) -> Self {
        Self {
            low: LowFrequencyTail::Drude(params),
            ..Self::default()
        }
    }
}

/// ε(iξ) from `table` with the default policy (ε₂ held constant below the table).
pub fn kramers_kronig_transform(table: &OpticalDataTable, xi: f64) -> Result<f64> {
    kramers_kronig_transform_with(table, xi, &ExtrapolationPolicy::default())
}

pub fn kramers_kronig_transform_with(table: &OpticalDataTable, xi: f64, policy: &ExtrapolationPolicy) -> Result<f64> {
    if !(xi.is_finite() && xi > 0.0) {
        return Err(Error::domain(format!("Kramers-Kronig needs xi > 0, got {xi}")));
    }
    Ok(1.0 + (2.0 / PI) * absorption_integral(table, xi, policy)?)
}

/// ε(0) of a table with no free-carrier tail: the ξ → 0 limit of the transform.
pub(crate) fn static_limit(table: &OpticalDataTable, policy: &ExtrapolationPolicy) -> Result<f64> {
    Ok(1.0 + (2.0 / PI) * absorption_integral(table, 0.0, policy)?)
}

/// ∫₀^∞ ω ε₂(ω)/(ω² + ξ²) dω. ξ = 0 is accepted for dielectric tails.
fn absorption_integral(table: &OpticalDataTable, xi: f64, policy: &ExtrapolationPolicy) -> Result<f64> {
    let rows = table.rows();
    let w_min = table.omega_min();
    let w_max = table.omega_max();
    let xi2 = xi * xi;
    let opts = QuadOptions::rel(policy.quad_rel_tol);

    // Table interior, split at every sample and at ω = ξ.
    let mut breaks: Vec<f64> = rows.iter().map(|r| r.omega).collect();
    if xi > w_min && xi < w_max {
        let i = breaks.partition_point(|&w| w < xi);
        if breaks[i] != xi {
            breaks.insert(i, xi);
        }
    }
    let inner = integrate_with_breaks(|w| w * table.eps2_interp(w) / (w * w + xi2), &breaks, opts);

    let low = match policy.low {
        LowFrequencyTail::HoldLowest => {
            let e0 = rows[0].eps2;
            if e0 == 0.0 {
                0.0
            } else if xi == 0.0 {
                return Err(Error::domain(
                    "static permittivity diverges: eps2 is nonzero at the table minimum",
                ));
            } else {
                0.5 * e0 * (w_min * w_min / xi2).ln_1p()
            }
        }
        LowFrequencyTail::Drude(d) => {
            if xi == 0.0 {
                return Err(Error::domain("static permittivity of a Drude tail is infinite"));
            }
            let (wp2, g) = (d.omega_p * d.omega_p, d.gamma);
            let f = |w: f64| wp2 * g / ((w * w + g * g) * (w * w + xi2));
            let mut br = vec![0.0];
            for x in [g, xi] {
                if x < w_min {
                    br.push(x);
                }
            }
            br.push(w_min);
            br.sort_by(f64::total_cmp);
            integrate_with_breaks(f, &br, opts).value
        }
    };

    let high = rows[rows.len() - 1].eps2 * cubic_tail_factor(xi / w_max);
    Ok(low + inner.value + high)
}

/// (1 − atan(x)/x)/x², the normalised ω⁻³ tail integral; → 1/3 as x → 0.
fn cubic_tail_factor(x: f64) -> f64 {
    if x < 1e-2 {
        let x2 = x * x;
        1.0 / 3.0 - x2 / 5.0 + x2 * x2 / 7.0 - x2 * x2 * x2 / 9.0
    } else {
        (1.0 - x.atan() / x) / (x * x)
    }
}

/// Direct quadrature of the ω⁻³ tail; used to cross-check the closed form.
#[allow(dead_code)]
fn cubic_tail_numeric(x: f64) -> f64 {
    // ω = ω_max/t maps [ω_max, ∞) onto (0, 1].
    integrate(|t| t * t / (1.0 + x * x * t * t), 0.0, 1.0, QuadOptions::rel(1e-12)).value
}
