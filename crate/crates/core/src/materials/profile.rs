//! Material profiles for the gold sphere and the silicon plate.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{
    BaseModel, DrudeParams, ExtrapolationPolicy, LorentzFit, LowFrequencyTail, OpticalDataTable, PermittivityModel,
    ZeroFrequencyClass,
};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MaterialProfile {
    #[serde(alias = "GoldTabulated")]
    GoldTabulated,
    #[serde(alias = "SiDarkDielectric")]
    SiDarkDielectric,
    #[serde(alias = "SiDarkWithDc")]
    SiDarkWithDc,
    #[serde(alias = "SiIlluminated")]
    SiIlluminated,
}

impl MaterialProfile {
    pub const ALL: [MaterialProfile; 4] = [
        MaterialProfile::GoldTabulated,
        MaterialProfile::SiDarkDielectric,
        MaterialProfile::SiDarkWithDc,
        MaterialProfile::SiIlluminated,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MaterialProfile::GoldTabulated => "gold_tabulated",
            MaterialProfile::SiDarkDielectric => "si_dark_dielectric",
            MaterialProfile::SiDarkWithDc => "si_dark_with_dc",
            MaterialProfile::SiIlluminated => "si_illuminated",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        let norm = s.to_ascii_lowercase().replace('-', "_");
        Self::ALL
            .into_iter()
            .find(|p| p.name() == norm || format!("{p:?}").to_ascii_lowercase() == norm)
    }
}

/// Inputs needed to assemble a profile. Which fields are required depends on
/// the profile; see [`build_material_profile`].
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ProfileInputs {
    pub table: Option<OpticalDataTable>,
    pub low_tail: Option<LowFrequencyTail>,
    pub lorentz: Option<LorentzFit>,
    /// Drude terms: one hole term for SiDarkWithDc; electron then hole for SiIlluminated.
    pub drude: Vec<DrudeParams>,
}

impl ProfileInputs {
    /// Parameters of the reference experiment: Drude-Lorentz gold table, the
    /// single-oscillator Si fit, and the measured carrier parameters.
    pub fn reference(profile: MaterialProfile) -> Self {
        match profile {
            MaterialProfile::GoldTabulated => {
                let gold = gold_drude_lorentz();
                Self {
                    table: Some(gold.table(reference::GOLD_TABLE_POINTS)),
                    low_tail: Some(LowFrequencyTail::Drude(gold.drude)),
                    ..Self::default()
                }
            }
            MaterialProfile::SiDarkDielectric => Self {
                lorentz: Some(reference::si_lorentz_fit()),
                ..Self::default()
            },
            MaterialProfile::SiDarkWithDc => Self {
                lorentz: Some(reference::si_lorentz_fit()),
                drude: vec![reference::dark_hole_drude()],
                ..Self::default()
            },
            MaterialProfile::SiIlluminated => Self {
                lorentz: Some(reference::si_lorentz_fit()),
                drude: vec![reference::electron_drude(), reference::hole_drude()],
                ..Self::default()
            },
        }
    }
}

pub fn build_material_profile(profile: MaterialProfile, inputs: &ProfileInputs) -> Result<PermittivityModel> {
    let expected_drude = match profile {
        MaterialProfile::GoldTabulated | MaterialProfile::SiDarkDielectric => 0,
        MaterialProfile::SiDarkWithDc => 1,
        MaterialProfile::SiIlluminated => 2,
    };
    if inputs.drude.len() != expected_drude {
        return Err(Error::Configuration(format!(
            "profile {} needs {expected_drude} Drude term(s), got {}",
            profile.name(),
            inputs.drude.len()
        )));
    }

    let base = match profile {
        MaterialProfile::GoldTabulated => {
            let table = inputs
                .table
                .clone()
                .ok_or_else(|| Error::Configuration("gold_tabulated needs an optical data table".into()))?;
            let low = inputs
                .low_tail
                .ok_or_else(|| Error::Configuration("gold_tabulated needs a low-frequency Drude tail".into()))?;
            BaseModel::Tabulated {
                table,
                policy: ExtrapolationPolicy {
                    low,
                    ..ExtrapolationPolicy::default()
                },
            }
        }
        _ => match (&inputs.table, &inputs.lorentz) {
            (Some(table), _) => BaseModel::Tabulated {
                table: table.clone(),
                policy: ExtrapolationPolicy {
                    low: inputs.low_tail.unwrap_or(LowFrequencyTail::HoldLowest),
                    ..ExtrapolationPolicy::default()
                },
            },
            (None, Some(fit)) => BaseModel::LorentzFit(*fit),
            (None, None) => {
                return Err(Error::Configuration(format!(
                    "profile {} needs an optical table or Lorentz parameters",
                    profile.name()
                )))
            }
        },
    };
    let class = match profile {
        MaterialProfile::SiDarkDielectric => ZeroFrequencyClass::Dielectric,
        _ => ZeroFrequencyClass::DrudeLike,
    };
    PermittivityModel::new(profile.name(), base, inputs.drude.clone(), class)
}

/// On-disk profile description:
/// `{ "profile": "...", "lorentz": {...}?, "drude": [...]?, "table_path": "..."? }`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileSpec {
    pub profile: MaterialProfile,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lorentz: Option<LorentzFit>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub drude: Option<Vec<DrudeParams>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table_path: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub low_tail: Option<LowFrequencyTail>,
}

impl ProfileSpec {
    pub fn reference(profile: MaterialProfile) -> Self {
        let inputs = ProfileInputs::reference(profile);
        Self {
            profile,
            lorentz: inputs.lorentz,
            drude: (!inputs.drude.is_empty()).then_some(inputs.drude),
            table_path: None,
            low_tail: inputs.low_tail,
        }
    }

    pub fn from_json_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        serde_json::from_str(&text).map_err(|e| Error::Parse {
            path: path.display().to_string(),
            line: e.line() as u64,
            message: e.to_string(),
        })
    }

    /// Resolve into a model. Relative `table_path`s are taken relative to
    /// `base_dir`. A missing base falls back to the reference gold table or the
    /// Si Lorentz fit; missing Drude terms stay missing.
    pub fn build(&self, base_dir: Option<&Path>) -> Result<PermittivityModel> {
        let mut inputs = ProfileInputs {
            lorentz: self.lorentz,
            drude: self.drude.clone().unwrap_or_default(),
            low_tail: self.low_tail,
            table: None,
        };
        if let Some(p) = &self.table_path {
            let full = match base_dir {
                Some(dir) if p.is_relative() => dir.join(p),
                _ => p.clone(),
            };
            inputs.table = Some(OpticalDataTable::from_csv_path(&full)?);
        }
        let reference = ProfileInputs::reference(self.profile);
        if self.profile == MaterialProfile::GoldTabulated {
            if inputs.table.is_none() {
                inputs.table = reference.table;
            }
            if inputs.low_tail.is_none() {
                inputs.low_tail = reference.low_tail;
            }
        } else if inputs.table.is_none() && inputs.lorentz.is_none() {
            inputs.lorentz = reference.lorentz;
        }
        build_material_profile(self.profile, &inputs)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LorentzOscillator {
    /// Oscillator strength (dimensionless, multiplies ω_p²).
    pub strength: f64,
    /// Resonance frequency, rad/s.
    pub omega: f64,
    /// Damping, rad/s.
    pub gamma: f64,
}

/// Drude-Lorentz parametrisation of a metal:
/// ε(ω) = 1 − f₀ω_p²/[ω(ω + iΓ₀)] + Σ f_k ω_p²/(ω_k² − ω² − iωΓ_k).
#[derive(Debug, Clone, PartialEq)]
pub struct DrudeLorentz {
    /// Free-electron part with the strength folded in: √f₀ ω_p and Γ₀.
    pub drude: DrudeParams,
    pub omega_p: f64,
    pub oscillators: Vec<LorentzOscillator>,
}

impl DrudeLorentz {
    /// Imaginary part of ε on the real axis.
    pub fn eps2(&self, w: f64) -> f64 {
        let d = &self.drude;
        let free = d.omega_p * d.omega_p * d.gamma / (w * (w * w + d.gamma * d.gamma));
        let bound: f64 = self
            .oscillators
            .iter()
            .map(|o| {
                let det = (o.omega * o.omega - w * w).powi(2) + w * w * o.gamma * o.gamma;
                o.strength * self.omega_p * self.omega_p * w * o.gamma / det
            })
            .sum();
        free + bound
    }

    pub fn eps1(&self, w: f64) -> f64 {
        let d = &self.drude;
        let free = -d.omega_p * d.omega_p / (w * w + d.gamma * d.gamma);
        let bound: f64 = self
            .oscillators
            .iter()
            .map(|o| {
                let det = (o.omega * o.omega - w * w).powi(2) + w * w * o.gamma * o.gamma;
                o.strength * self.omega_p * self.omega_p * (o.omega * o.omega - w * w) / det
            })
            .sum();
        1.0 + free + bound
    }

    /// Analytic continuation to ω = iξ.
    pub fn eval_imaginary(&self, xi: f64) -> f64 {
        let d = &self.drude;
        let free = d.omega_p * d.omega_p / (xi * (xi + d.gamma));
        let bound: f64 = self
            .oscillators
            .iter()
            .map(|o| o.strength * self.omega_p * self.omega_p / (o.omega * o.omega + xi * xi + xi * o.gamma))
            .sum();
        1.0 + free + bound
    }

    /// Sample the model on `n` log-spaced frequencies between 0.02 eV and 1 keV.
    pub fn table(&self, n: usize) -> OpticalDataTable {
        use crate::constants::EV_TO_RAD_S;
        let (lo, hi) = ((0.02 * EV_TO_RAD_S).ln(), (1000.0 * EV_TO_RAD_S).ln());
        OpticalDataTable::from_triples((0..n).map(|i| {
            let w = (lo + (hi - lo) * i as f64 / (n - 1) as f64).exp();
            (w, self.eps1(w), self.eps2(w))
        }))
        .expect("Drude-Lorentz samples form a valid table")
    }
}

/// Gold in the Drude-Lorentz form of Rakić et al., Appl. Opt. 37, 5271 (1998).
pub fn gold_drude_lorentz() -> DrudeLorentz {
    use crate::constants::EV_TO_RAD_S as EV;
    let omega_p = 9.03 * EV;
    let f0: f64 = 0.760;
    let osc = |strength: f64, omega: f64, gamma: f64| LorentzOscillator {
        strength,
        omega: omega * EV,
        gamma: gamma * EV,
    };
    DrudeLorentz {
        drude: DrudeParams {
            omega_p: f0.sqrt() * omega_p,
            gamma: 0.053 * EV,
        },
        omega_p,
        oscillators: vec![
            osc(0.024, 0.415, 0.241),
            osc(0.010, 0.830, 0.345),
            osc(0.071, 2.969, 0.870),
            osc(0.601, 4.304, 2.494),
            osc(4.384, 13.32, 2.214),
        ],
    }
}

/// Parameter values of the reference experiment.
pub mod reference {
    use super::{DrudeParams, LorentzFit};
    use crate::materials::IlluminationSpec;

    pub const GOLD_TABLE_POINTS: usize = 1200;

    /// Static permittivity of high-resistivity Si.
    pub const SI_EPS_STATIC: f64 = 11.66;
    /// High-frequency permittivity of the single-oscillator Si fit.
    pub const SI_EPS_INF: f64 = 1.035;
    /// Oscillator frequency of the single-oscillator Si fit, rad/s.
    pub const SI_OMEGA0: f64 = 6.6e15;

    pub const GAMMA_HOLE: f64 = 5.0e12;
    pub const GAMMA_ELECTRON: f64 = 1.8e13;
    pub const MASS_RATIO_HOLE: f64 = 0.2063;
    pub const MASS_RATIO_ELECTRON: f64 = 0.2588;
    /// Dark carrier density of 10 Ω·cm p-Si, m⁻³.
    pub const DARK_DENSITY: f64 = 5e14 * 1e6;
    /// Hole plasma frequency of dark Si, rad/s.
    pub const DARK_HOLE_OMEGA_P: f64 = 2.8e12;
    /// Plasma frequencies of the photo-excited carriers, rad/s.
    pub const LIGHT_HOLE_OMEGA_P: f64 = 5.6e14;
    pub const LIGHT_ELECTRON_OMEGA_P: f64 = 5.0e14;

    /// Sphere radius (half of the 197.8 μm diameter), m.
    pub const SPHERE_RADIUS: f64 = 98.9e-6;
    pub const TEMPERATURE: f64 = 300.0;

    pub fn si_lorentz_fit() -> LorentzFit {
        LorentzFit {
            eps_inf: SI_EPS_INF,
            eps_static: SI_EPS_STATIC,
            omega0: SI_OMEGA0,
        }
    }

    pub fn dark_hole_drude() -> DrudeParams {
        DrudeParams {
            omega_p: DARK_HOLE_OMEGA_P,
            gamma: GAMMA_HOLE,
        }
    }

    pub fn hole_drude() -> DrudeParams {
        DrudeParams {
            omega_p: LIGHT_HOLE_OMEGA_P,
            gamma: GAMMA_HOLE,
        }
    }

    pub fn electron_drude() -> DrudeParams {
        DrudeParams {
            omega_p: LIGHT_ELECTRON_OMEGA_P,
            gamma: GAMMA_ELECTRON,
        }
    }

    pub fn illumination() -> IlluminationSpec {
        IlluminationSpec {
            absorbed_power: 3.4e-3,
            lifetime: 0.38e-3,
            photon_omega: 3.66e15,
            thickness: 4e-6,
            gauss_width: 0.23e-3,
        }
    }
}
