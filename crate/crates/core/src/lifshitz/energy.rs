use std::f64::consts::PI;

use rayon::prelude::*;

use super::fresnel::{reflection_scaled, zero_frequency_coefficients};
use super::{matsubara_frequency, HalfSpace, LifshitzConfig, SpherePlateGeometry};
use crate::constants::{C, K_B};
use crate::quadrature::{integrate, QuadOptions};
use crate::{Error, Result};

/// A half-space with its zero-frequency coefficients and (optionally) ε at the
/// first Matsubara frequencies evaluated ahead of time.
#[derive(Debug, Clone)]
pub struct Spectrum<'a> {
    half_space: &'a HalfSpace,
    temperature: f64,
    zero: (f64, f64),
    eps: Vec<f64>,
}

impl<'a> Spectrum<'a> {
    /// Evaluate ε(iξ_j) for j = 1..=terms up front.
    pub fn precompute(half_space: &'a HalfSpace, temperature: f64, terms: usize) -> Result<Self> {
        let zero = zero_frequency_coefficients(half_space)?;
        let xi1 = matsubara_frequency(1, temperature)?;
        let eps = (1..=terms)
            .into_par_iter()
            .map(|j| half_space.model.eval(xi1 * j as f64))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            half_space,
            temperature,
            zero,
            eps,
        })
    }

    pub fn lazy(half_space: &'a HalfSpace, temperature: f64) -> Result<Self> {
        Self::precompute(half_space, temperature, 0)
    }

    pub fn half_space(&self) -> &HalfSpace {
        self.half_space
    }

    fn eps(&self, j: usize, xi: f64) -> Result<f64> {
        match self.eps.get(j - 1) {
            Some(&e) => Ok(e),
            None => self.half_space.model.eval(xi),
        }
    }
}

/// Number of Matsubara terms until 2ξ_j z/c exceeds `y_reach`.
pub(crate) fn terms_to_reach(z: f64, temperature: f64, y_reach: f64, cap: usize) -> usize {
    let y1 = 2.0 * z * matsubara_frequency(1, temperature).unwrap_or(0.0) / C;
    if y1 <= 0.0 {
        return cap;
    }
    ((y_reach / y1).ceil() as usize + 3).min(cap)
}

/// Contribution of one Matsubara frequency to E, J/m², weight included.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatsubaraTerm {
    pub j: usize,
    pub xi: f64,
    pub tm: f64,
    pub te: f64,
}

impl MatsubaraTerm {
    pub fn total(&self) -> f64 {
        self.tm + self.te
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FreeEnergyBreakdown {
    pub z: f64,
    pub terms: Vec<MatsubaraTerm>,
    pub total: f64,
}

/// ∫ y ln(1 − A e^{−y}) dy over [lo, lo + cutoff], with A = r₁r₂ fixed.
fn zero_frequency_integral(product: f64, cfg: &LifshitzConfig) -> f64 {
    if product == 0.0 {
        return 0.0;
    }
    integrate(
        |y| y * (-product * (-y).exp()).ln_1p(),
        0.0,
        cfg.y_cutoff,
        QuadOptions::rel(cfg.quad_rel_tol),
    )
    .value
}

/// TM and TE y-integrals at one nonzero Matsubara frequency (y_xi = 2ξz/c).
fn matsubara_integrals(eps1: f64, eps2: f64, y_xi: f64, cfg: &LifshitzConfig) -> (f64, f64) {
    let opts = QuadOptions::rel(cfg.quad_rel_tol);
    let (lo, hi) = (y_xi, y_xi + cfg.y_cutoff);
    let tm = integrate(
        |y| {
            let (a, _) = reflection_scaled(eps1, y, y_xi);
            let (b, _) = reflection_scaled(eps2, y, y_xi);
            y * (-a * b * (-y).exp()).ln_1p()
        },
        lo,
        hi,
        opts,
    )
    .value;
    let te = integrate(
        |y| {
            let (_, a) = reflection_scaled(eps1, y, y_xi);
            let (_, b) = reflection_scaled(eps2, y, y_xi);
            y * (-a * b * (-y).exp()).ln_1p()
        },
        lo,
        hi,
        opts,
    )
    .value;
    (tm, te)
}

/// Term-by-term Lifshitz free energy per area.
pub fn free_energy_breakdown_with(
    z: f64,
    side1: &Spectrum<'_>,
    side2: &Spectrum<'_>,
    cfg: &LifshitzConfig,
) -> Result<FreeEnergyBreakdown> {
    cfg.validate()?;
    if !(z.is_finite() && z > 0.0) {
        return Err(Error::Geometry(format!("separation must be > 0, got {z}")));
    }
    let t = cfg.temperature;
    for side in [side1, side2] {
        if side.temperature != t && !side.eps.is_empty() {
            return Err(Error::Configuration(format!(
                "spectrum precomputed at {} K used at {t} K",
                side.temperature
            )));
        }
    }
    let prefactor = K_B * t / (2.0 * PI) / (4.0 * z * z);
    let xi1 = matsubara_frequency(1, t)?;
    let y1 = 2.0 * z * xi1 / C;

    let mut terms = Vec::new();
    let tm0 = 0.5 * prefactor * zero_frequency_integral(side1.zero.0 * side2.zero.0, cfg);
    let te0 = 0.5 * prefactor * zero_frequency_integral(side1.zero.1 * side2.zero.1, cfg);
    terms.push(MatsubaraTerm {
        j: 0,
        xi: 0.0,
        tm: tm0,
        te: te0,
    });
    let mut sum = tm0 + te0;

    let mut small = 0;
    let mut j = 1;
    loop {
        if j >= cfg.matsubara_max_terms {
            return Err(Error::Convergence {
                terms: j,
                partial: sum,
                last_term: terms.last().map(|t| t.total()).unwrap_or(0.0),
            });
        }
        let xi = xi1 * j as f64;
        let e1 = side1.eps(j, xi)?;
        let e2 = side2.eps(j, xi)?;
        let (tm, te) = matsubara_integrals(e1, e2, y1 * j as f64, cfg);
        let term = MatsubaraTerm {
            j,
            xi,
            tm: prefactor * tm,
            te: prefactor * te,
        };
        sum += term.total();
        terms.push(term);
        if term.total().abs() <= cfg.matsubara_rel_tol * sum.abs() {
            small += 1;
            if small == 3 {
                break;
            }
        } else {
            small = 0;
        }
        j += 1;
    }
    // Fixed summation order: ascending j.
    let total = terms.iter().map(MatsubaraTerm::total).sum();
    Ok(FreeEnergyBreakdown { z, terms, total })
}

pub fn free_energy_breakdown(
    z: f64,
    hs1: &HalfSpace,
    hs2: &HalfSpace,
    cfg: &LifshitzConfig,
) -> Result<FreeEnergyBreakdown> {
    cfg.validate()?;
    let n = terms_to_reach(z, cfg.temperature, 50.0, cfg.matsubara_max_terms.min(4096));
    let s1 = Spectrum::precompute(hs1, cfg.temperature, n)?;
    let s2 = Spectrum::precompute(hs2, cfg.temperature, n)?;
    free_energy_breakdown_with(z, &s1, &s2, cfg)
}

/// Lifshitz free energy per unit area between two half-spaces, J/m².
pub fn free_energy_per_area(z: f64, hs1: &HalfSpace, hs2: &HalfSpace, cfg: &LifshitzConfig) -> Result<f64> {
    free_energy_breakdown(z, hs1, hs2, cfg).map(|b| b.total)
}

pub(crate) fn sphere_plate_force_with(
    radius: f64,
    z: f64,
    sphere: &Spectrum<'_>,
    plate: &Spectrum<'_>,
    cfg: &LifshitzConfig,
) -> Result<f64> {
    let e = free_energy_breakdown_with(z, sphere, plate, cfg)?.total;
    Ok(2.0 * PI * radius * e)
}

/// Proximity-force sphere-plate force F = 2πR·E(z), N (negative = attractive).
pub fn sphere_plate_force(
    geom: &SpherePlateGeometry,
    hs_sphere: &HalfSpace,
    hs_plate: &HalfSpace,
    cfg: &LifshitzConfig,
) -> Result<f64> {
    let e = free_energy_per_area(geom.separation, hs_sphere, hs_plate, cfg)?;
    Ok(2.0 * PI * geom.radius * e)
}

/// F(light) − F(dark) at the same geometry.
pub fn force_difference(
    geom: &SpherePlateGeometry,
    hs_sphere: &HalfSpace,
    hs_plate_light: &HalfSpace,
    hs_plate_dark: &HalfSpace,
    cfg: &LifshitzConfig,
) -> Result<f64> {
    let light = sphere_plate_force(geom, hs_sphere, hs_plate_light, cfg)?;
    let dark = sphere_plate_force(geom, hs_sphere, hs_plate_dark, cfg)?;
    Ok(light - dark)
}
