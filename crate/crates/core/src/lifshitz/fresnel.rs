//! Reflection coefficients of a half-space on the imaginary frequency axis.

use super::HalfSpace;
use crate::constants::C;
use crate::materials::ZeroFrequencyClass;
use crate::{Error, Result};

/// Reflection coefficients in terms of y = 2qz and y_ξ = 2ξz/c (any common
/// scale works). Written with 1/ε so ε = ∞ and ε → 1 are both exact.
#[inline]
pub(crate) fn reflection_scaled(eps: f64, y: f64, y_xi: f64) -> (f64, f64) {
    let inv = 1.0 / eps;
    let one_minus = 1.0 - inv;
    let y2 = y * y;
    let yx2 = y_xi * y_xi;
    // εq − k over εq + k, multiplied through by (εq + k)/ε².
    let k_over_eps = (y2 * inv * inv + inv * one_minus * yx2).sqrt();
    let r_tm = one_minus * ((1.0 + inv) * y2 - inv * yx2) / ((y + k_over_eps) * (y + k_over_eps));
    // q − k over q + k, multiplied through by (q + k)/ε^{1/2}.
    let s = inv.sqrt();
    let k_s = (y2 * inv + one_minus * yx2).sqrt();
    let den = y * s + k_s;
    let r_te = if yx2 == 0.0 {
        0.0
    } else {
        -one_minus * yx2 / (den * den)
    };
    (r_tm, r_te)
}

/// (r_TM, r_TE) for permittivity `eps` at imaginary frequency `xi` and
/// in-plane wave number `kperp`.
pub fn fresnel_coefficients(eps: f64, xi: f64, kperp: f64) -> Result<(f64, f64)> {
    if !(eps >= 1.0) {
        return Err(Error::domain(format!("permittivity must be >= 1, got {eps}")));
    }
    if !(xi.is_finite() && xi > 0.0) {
        return Err(Error::domain(format!("xi must be > 0, got {xi}")));
    }
    if !(kperp.is_finite() && kperp >= 0.0) {
        return Err(Error::domain(format!("kperp must be >= 0, got {kperp}")));
    }
    let kappa = xi / C;
    let q = (kperp * kperp + kappa * kappa).sqrt();
    Ok(reflection_scaled(eps, q, kappa))
}

/// (r_TM(0), r_TE(0)) from the model's zero-frequency class.
pub fn zero_frequency_coefficients(hs: &HalfSpace) -> Result<(f64, f64)> {
    let (tm, te) = match hs.model.zero_freq_class() {
        ZeroFrequencyClass::Dielectric => {
            let eps0 = hs
                .model
                .static_permittivity()?
                .expect("dielectric models have a static permittivity");
            ((eps0 - 1.0) / (eps0 + 1.0), 0.0)
        }
        ZeroFrequencyClass::DrudeLike => (1.0, 0.0),
        ZeroFrequencyClass::PerfectReflector => (1.0, 1.0),
    };
    Ok((tm, hs.zero_frequency_te.unwrap_or(te)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::materials::{build_material_profile, MaterialProfile, PermittivityModel, ProfileInputs};

    // Textbook form, evaluated directly.
    fn naive(eps: f64, xi: f64, kperp: f64) -> (f64, f64) {
        let q = (kperp * kperp + xi * xi / (C * C)).sqrt();
        let k = (kperp * kperp + eps * xi * xi / (C * C)).sqrt();
        ((eps * q - k) / (eps * q + k), (q - k) / (q + k))
    }

    #[test]
    fn vacuum_does_not_reflect() {
        assert_eq!(fresnel_coefficients(1.0, 2.47e14, 1e7).unwrap(), (0.0, 0.0));
        assert_eq!(fresnel_coefficients(1.0, 2.47e14, 0.0).unwrap(), (0.0, 0.0));
    }

    #[test]
    fn perfect_reflector_limit() {
        let (tm, te) = fresnel_coefficients(f64::INFINITY, 2.47e14, 1e7).unwrap();
        assert_eq!((tm, te), (1.0, -1.0));
        let (tm, te) = fresnel_coefficients(1e14, 2.47e14, 1e7).unwrap();
        assert!((1.0 - tm) < 1e-3 && (te + 1.0) < 1e-3);
    }

    #[test]
    fn silicon_at_first_matsubara_frequency() {
        let (eps, xi, kperp) = (11.66, 2.47e14, 1.0 / 100e-9);
        let (tm, te) = fresnel_coefficients(eps, xi, kperp).unwrap();
        let (tm0, te0) = naive(eps, xi, kperp);
        assert!((tm - tm0).abs() < 1e-14 && (te - te0).abs() < 1e-14);
        assert!(tm > 0.0 && tm < 1.0 && te < 0.0 && te > -1.0);
    }

    #[test]
    fn ranges_over_a_sweep() {
        for &eps in &[1.0 + 1e-9, 1.5, 11.66, 1e3, 1e8] {
            for &kp in &[0.0, 1e5, 1e7, 1e9] {
                let (tm, te) = fresnel_coefficients(eps, 1e15, kp).unwrap();
                let (tm0, te0) = naive(eps, 1e15, kp);
                assert!((0.0..1.0).contains(&tm), "{eps} {kp} {tm}");
                assert!(te <= 0.0 && te > -1.0);
                assert!((tm - tm0).abs() < 1e-9 && (te - te0).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn rejects_sub_unity_permittivity() {
        assert!(fresnel_coefficients(0.5, 1e14, 1e7).is_err());
        assert!(fresnel_coefficients(f64::NAN, 1e14, 1e7).is_err());
        assert!(fresnel_coefficients(2.0, 0.0, 1e7).is_err());
    }

    #[test]
    fn zero_frequency_classes() {
        let p = |p| HalfSpace::new(build_material_profile(p, &ProfileInputs::reference(p)).unwrap());
        let (tm, te) = zero_frequency_coefficients(&p(MaterialProfile::SiDarkDielectric)).unwrap();
        assert!((tm - 10.66 / 12.66).abs() < 1e-15);
        assert!((tm - 0.8421).abs() < 1e-4);
        assert_eq!(te, 0.0);
        for prof in [
            MaterialProfile::SiIlluminated,
            MaterialProfile::SiDarkWithDc,
            MaterialProfile::GoldTabulated,
        ] {
            assert_eq!(zero_frequency_coefficients(&p(prof)).unwrap(), (1.0, 0.0));
        }
        let pr = HalfSpace::new(PermittivityModel::perfect_reflector());
        assert_eq!(zero_frequency_coefficients(&pr).unwrap(), (1.0, 1.0));
        let gold_plasma = p(MaterialProfile::GoldTabulated).with_zero_frequency_te(1.0);
        assert_eq!(zero_frequency_coefficients(&gold_plasma).unwrap(), (1.0, 1.0));
    }
}
