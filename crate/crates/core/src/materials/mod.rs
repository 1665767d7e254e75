//! Dielectric response along the imaginary frequency axis.

mod carriers;
mod kramers_kronig;
mod profile;
pub(crate) mod table;

use serde::{Deserialize, Serialize};

pub use carriers::{carrier_density_from_illumination, plasma_frequency, CarrierSpec, IlluminationSpec};
pub use kramers_kronig::{
    kramers_kronig_transform, kramers_kronig_transform_with, ExtrapolationPolicy, LowFrequencyTail,
};
pub use profile::{
    build_material_profile, gold_drude_lorentz, reference, DrudeLorentz, LorentzOscillator, MaterialProfile,
    ProfileInputs, ProfileSpec,
};
pub use table::{OpticalDataTable, OpticalRow};

use crate::{Error, Result};

/// Free-carrier term ω_p²/[ξ(ξ + γ)].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DrudeParams {
    /// Plasma frequency, rad/s.
    pub omega_p: f64,
    /// Relaxation parameter, rad/s.
    pub gamma: f64,
}

impl DrudeParams {
    pub fn new(omega_p: f64, gamma: f64) -> Result<Self> {
        let p = Self { omega_p, gamma };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.omega_p.is_finite() && self.omega_p > 0.0) {
            return Err(Error::invalid(format!("omega_p must be > 0, got {}", self.omega_p)));
        }
        if !(self.gamma.is_finite() && self.gamma > 0.0) {
            return Err(Error::invalid(format!("gamma must be > 0, got {}", self.gamma)));
        }
        Ok(())
    }
}

pub fn drude_term(params: &DrudeParams, xi: f64) -> Result<f64> {
    if !(xi.is_finite() && xi > 0.0) {
        return Err(Error::domain(format!("Drude term needs xi > 0, got {xi}")));
    }
    Ok(params.omega_p * params.omega_p / (xi * (xi + params.gamma)))
}

/// Single-oscillator form ε(iξ) = ε∞ + (ε_s − ε∞)·ω₀²/(ω₀² + ξ²).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LorentzFit {
    pub eps_inf: f64,
    pub eps_static: f64,
    /// Oscillator frequency, rad/s.
    pub omega0: f64,
}

impl LorentzFit {
    pub fn new(eps_inf: f64, eps_static: f64, omega0: f64) -> Result<Self> {
        let fit = Self {
            eps_inf,
            eps_static,
            omega0,
        };
        fit.validate()?;
        Ok(fit)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.eps_inf >= 1.0 && self.eps_static > self.eps_inf && self.eps_static.is_finite()) {
            return Err(Error::invalid(format!(
                "Lorentz fit needs eps_static > eps_inf >= 1 (got {}, {})",
                self.eps_static, self.eps_inf
            )));
        }
        if !(self.omega0.is_finite() && self.omega0 > 0.0) {
            return Err(Error::invalid("Lorentz fit omega0 must be > 0"));
        }
        Ok(())
    }

    pub fn eval(&self, xi: f64) -> f64 {
        let w2 = self.omega0 * self.omega0;
        self.eps_inf + (self.eps_static - self.eps_inf) * w2 / (w2 + xi * xi)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum BaseModel {
    Tabulated {
        table: OpticalDataTable,
        policy: ExtrapolationPolicy,
    },
    LorentzFit(LorentzFit),
    /// ε = ∞ at every frequency.
    PerfectConductor,
}

/// How the reflection coefficients behave at ξ = 0, where Drude terms diverge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ZeroFrequencyClass {
    Dielectric,
    DrudeLike,
    PerfectReflector,
}

/// ε(iξ) = base(ξ) + Σ Drude terms, with an explicit zero-frequency class.
#[derive(Debug, Clone, PartialEq)]
pub struct PermittivityModel {
    label: String,
    base: BaseModel,
    drude_terms: Vec<DrudeParams>,
    zero_freq_class: ZeroFrequencyClass,
}

impl PermittivityModel {
    pub fn new(
        label: impl Into<String>,
        base: BaseModel,
        drude_terms: Vec<DrudeParams>,
        zero_freq_class: ZeroFrequencyClass,
    ) -> Result<Self> {
        match &base {
            BaseModel::LorentzFit(fit) => fit.validate()?,
            BaseModel::Tabulated { policy, .. } => {
                if let LowFrequencyTail::Drude(d) = policy.low {
                    d.validate()?;
                }
            }
            BaseModel::PerfectConductor => {}
        }
        for d in &drude_terms {
            d.validate()?;
        }
        if !drude_terms.is_empty() && zero_freq_class != ZeroFrequencyClass::DrudeLike {
            return Err(Error::Configuration(
                "models with Drude terms must use the DrudeLike zero-frequency class".into(),
            ));
        }
        let perfect_base = matches!(base, BaseModel::PerfectConductor);
        if perfect_base != (zero_freq_class == ZeroFrequencyClass::PerfectReflector) {
            return Err(Error::Configuration(
                "a perfect-conductor base requires the PerfectReflector class and vice versa".into(),
            ));
        }
        Ok(Self {
            label: label.into(),
            base,
            drude_terms,
            zero_freq_class,
        })
    }

    pub fn perfect_reflector() -> Self {
        Self {
            label: "perfect_reflector".into(),
            base: BaseModel::PerfectConductor,
            drude_terms: Vec::new(),
            zero_freq_class: ZeroFrequencyClass::PerfectReflector,
        }
    }

    /// ε ≡ 1, a half-space that does not reflect.
    pub fn vacuum() -> Self {
        let table = OpticalDataTable::from_triples([(1.0, 1.0, 0.0), (2.0, 1.0, 0.0)]).expect("static table is valid");
        Self {
            label: "vacuum".into(),
            base: BaseModel::Tabulated {
                table,
                policy: ExtrapolationPolicy::default(),
            },
            drude_terms: Vec::new(),
            zero_freq_class: ZeroFrequencyClass::Dielectric,
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn base(&self) -> &BaseModel {
        &self.base
    }

    pub fn drude_terms(&self) -> &[DrudeParams] {
        &self.drude_terms
    }

    pub fn zero_freq_class(&self) -> ZeroFrequencyClass {
        self.zero_freq_class
    }

    /// The base (interband/lattice) part of ε(iξ), without Drude terms.
    pub fn eval_base(&self, xi: f64) -> Result<f64> {
        if !(xi.is_finite() && xi > 0.0) {
            return Err(Error::domain(format!("permittivity needs xi > 0, got {xi}")));
        }
        match &self.base {
            BaseModel::Tabulated { table, policy } => kramers_kronig_transform_with(table, xi, policy),
            BaseModel::LorentzFit(fit) => Ok(fit.eval(xi)),
            BaseModel::PerfectConductor => Ok(f64::INFINITY),
        }
    }

    pub fn eval(&self, xi: f64) -> Result<f64> {
        let mut eps = self.eval_base(xi)?;
        for d in &self.drude_terms {
            eps += drude_term(d, xi)?;
        }
        Ok(eps)
    }

    /// ε(0) for dielectric models; None for Drude-like and perfect reflectors.
    pub fn static_permittivity(&self) -> Result<Option<f64>> {
        if self.zero_freq_class != ZeroFrequencyClass::Dielectric {
            return Ok(None);
        }
        match &self.base {
            BaseModel::LorentzFit(fit) => Ok(Some(fit.eps_static)),
            BaseModel::Tabulated { table, policy } => kramers_kronig::static_limit(table, policy).map(Some),
            BaseModel::PerfectConductor => Ok(None),
        }
    }
}

pub fn eval_permittivity(model: &PermittivityModel, xi: f64) -> Result<f64> {
    model.eval(xi)
}
