//! Separation sweeps and their CSV/JSON serialisation.

use std::io::{Read, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::energy::{free_energy_breakdown_with, sphere_plate_force_with, terms_to_reach, Spectrum};
use super::{HalfSpace, LifshitzConfig, SpherePlateGeometry};
use crate::materials::table::csv_error;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CurveKind {
    Force,
    ForceDifference,
    FreeEnergyPerArea,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveMetadata {
    pub sphere: String,
    pub plate: String,
    /// Dark-phase plate for force differences.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub plate_dark: Option<String>,
    pub temperature: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub config: Option<LifshitzConfig>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ForceCurve {
    points: Vec<(f64, f64)>,
    kind: CurveKind,
    metadata: CurveMetadata,
}

impl ForceCurve {
    pub fn new(points: Vec<(f64, f64)>, kind: CurveKind, metadata: CurveMetadata) -> Result<Self> {
        if let Some(i) = points.windows(2).position(|w| w[1].0 <= w[0].0) {
            return Err(Error::invalid(format!(
                "separations not strictly increasing at index {}",
                i + 1
            )));
        }
        if let Some(&(z, _)) = points.iter().find(|p| !(p.0 > 0.0)) {
            return Err(Error::invalid(format!("separation must be > 0, got {z}")));
        }
        if kind == CurveKind::Force {
            if let Some(&(z, v)) = points.iter().find(|p| !(p.1 < 0.0)) {
                return Err(Error::invalid(format!(
                    "force at z = {z:e} m is not attractive ({v:e} N)"
                )));
            }
        }
        Ok(Self { points, kind, metadata })
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    pub fn separations(&self) -> impl Iterator<Item = f64> + '_ {
        self.points.iter().map(|p| p.0)
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        self.points.iter().map(|p| p.1)
    }

    pub fn kind(&self) -> CurveKind {
        self.kind
    }

    pub fn metadata(&self) -> &CurveMetadata {
        &self.metadata
    }

    /// `z_m,value_N` rows, shortest round-trip formatting.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "z_m,value_N")?;
        for (z, v) in &self.points {
            writeln!(w, "{z:e},{v:e}")?;
        }
        Ok(())
    }

    pub fn read_csv<R: Read>(reader: R, source: &str, kind: CurveKind, metadata: CurveMetadata) -> Result<Self> {
        #[derive(Deserialize)]
        struct Row {
            z_m: f64,
            #[serde(rename = "value_N")]
            value: f64,
        }
        let mut rdr = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .from_reader(reader);
        let mut points = Vec::new();
        for rec in rdr.deserialize::<Row>() {
            let r = rec.map_err(|e| csv_error(e, source))?;
            points.push((r.z_m, r.value));
        }
        Self::new(points, kind, metadata).map_err(|e| Error::Parse {
            path: source.to_string(),
            line: 0,
            message: e.to_string(),
        })
    }

    /// Sidecar document: kind, metadata and the producing crate version.
    pub fn sidecar(&self) -> serde_json::Value {
        serde_json::json!({
            "kind": self.kind,
            "points": self.points.len(),
            "metadata": self.metadata,
            "code_version": env!("CARGO_PKG_VERSION"),
        })
    }
}

/// What to evaluate at each separation.
#[derive(Debug, Clone, Copy)]
pub enum CurveRequest<'a> {
    Force {
        sphere: &'a HalfSpace,
        plate: &'a HalfSpace,
    },
    Difference {
        sphere: &'a HalfSpace,
        light: &'a HalfSpace,
        dark: &'a HalfSpace,
    },
    FreeEnergy {
        first: &'a HalfSpace,
        second: &'a HalfSpace,
    },
}

impl CurveRequest<'_> {
    pub fn kind(&self) -> CurveKind {
        match self {
            CurveRequest::Force { .. } => CurveKind::Force,
            CurveRequest::Difference { .. } => CurveKind::ForceDifference,
            CurveRequest::FreeEnergy { .. } => CurveKind::FreeEnergyPerArea,
        }
    }

    fn half_spaces(&self) -> Vec<&HalfSpace> {
        match *self {
            CurveRequest::Force { sphere, plate } => vec![sphere, plate],
            CurveRequest::Difference { sphere, light, dark } => vec![sphere, light, dark],
            CurveRequest::FreeEnergy { first, second } => vec![first, second],
        }
    }

    fn metadata(&self, radius: f64, cfg: &LifshitzConfig) -> CurveMetadata {
        let (sphere, plate, plate_dark, radius) = match *self {
            CurveRequest::Force { sphere, plate } => (sphere, plate, None, Some(radius)),
            CurveRequest::Difference { sphere, light, dark } => {
                (sphere, light, Some(dark.label().to_string()), Some(radius))
            }
            CurveRequest::FreeEnergy { first, second } => (first, second, None, None),
        };
        CurveMetadata {
            sphere: sphere.label().to_string(),
            plate: plate.label().to_string(),
            plate_dark,
            temperature: cfg.temperature,
            radius,
            config: Some(*cfg),
        }
    }
}

/// Evaluate the request at every separation in `grid` (any order). The outer
/// error covers setup failures; each point carries its own result.
pub fn force_values(
    grid: &[f64],
    radius: f64,
    request: &CurveRequest<'_>,
    cfg: &LifshitzConfig,
) -> Result<Vec<Result<f64>>> {
    cfg.validate()?;
    if !(radius.is_finite() && radius > 0.0) {
        return Err(Error::Geometry(format!("radius must be > 0, got {radius}")));
    }
    let z_min = grid.iter().copied().fold(f64::INFINITY, f64::min);
    let n = if z_min.is_finite() && z_min > 0.0 {
        terms_to_reach(z_min, cfg.temperature, 50.0, cfg.matsubara_max_terms.min(20_000))
    } else {
        0
    };
    let spectra = request
        .half_spaces()
        .into_iter()
        .map(|hs| Spectrum::precompute(hs, cfg.temperature, n))
        .collect::<Result<Vec<_>>>()?;

    let eval_point = |z: f64| -> Result<f64> {
        if z / radius >= super::PFA_RATIO_LIMIT || !(z > 0.0) {
            SpherePlateGeometry::new(radius, z)?;
        }
        match request {
            CurveRequest::Force { .. } => sphere_plate_force_with(radius, z, &spectra[0], &spectra[1], cfg),
            CurveRequest::Difference { .. } => {
                let light = sphere_plate_force_with(radius, z, &spectra[0], &spectra[1], cfg)?;
                let dark = sphere_plate_force_with(radius, z, &spectra[0], &spectra[2], cfg)?;
                Ok(light - dark)
            }
            CurveRequest::FreeEnergy { .. } => Ok(free_energy_breakdown_with(z, &spectra[0], &spectra[1], cfg)?.total),
        }
    };
    Ok(grid
        .par_iter()
        .map(|&z| eval_point(z).map_err(|e| Error::AtSeparation { z, source: Box::new(e) }))
        .collect())
}

/// Ascending sweep assembled into a [`ForceCurve`]; the first failing point aborts.
pub fn force_curve(grid: &[f64], radius: f64, request: &CurveRequest<'_>, cfg: &LifshitzConfig) -> Result<ForceCurve> {
    if let Some(i) = grid.windows(2).position(|w| w[1] <= w[0]) {
        return Err(Error::invalid(format!(
            "grid not strictly ascending at index {}",
            i + 1
        )));
    }
    let values = force_values(grid, radius, request, cfg)?;
    let points = grid
        .iter()
        .zip(values)
        .map(|(&z, v)| v.map(|v| (z, v)))
        .collect::<Result<Vec<_>>>()?;
    ForceCurve::new(points, request.kind(), request.metadata(radius, cfg))
}
