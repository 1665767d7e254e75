use std::f64::consts::PI;

use super::ElectrostaticCalib;
use crate::constants::EPS_0;
use crate::{Error, Result};

/// Capacitance gradient c(z) of a sphere of radius `radius` above a grounded
/// plane, N/V², from the image-charge series
///
/// c(z) = 2πε₀ Σ_{n≥1} csch(nα) [coth α − n coth(nα)],  cosh α = 1 + z/R.
///
/// Every term is negative, so c(z) < 0. Summation stops once a term adds
/// less than 1e-12 of the running total.
pub fn electrostatic_coefficient(z: f64, radius: f64) -> Result<f64> {
    if !(radius.is_finite() && radius > 0.0) {
        return Err(Error::domain(format!("sphere radius must be > 0, got {radius}")));
    }
    if !(z.is_finite() && z > 0.0) {
        return Err(Error::domain(format!("separation must be > 0, got {z}")));
    }
    if z >= radius {
        return Err(Error::domain(format!(
            "separation {z:e} m is not small compared with the radius {radius:e} m"
        )));
    }
    // acosh(1 + x) without cancellation for small x.
    let x = z / radius;
    let alpha = (x + (x * (2.0 + x)).sqrt()).ln_1p();
    let coth_a = 1.0 / alpha.tanh();
    let mut sum = 0.0;
    for n in 1u32.. {
        let na = n as f64 * alpha;
        if na > 700.0 {
            break;
        }
        let t = (coth_a - n as f64 / na.tanh()) / na.sinh();
        sum += t;
        if n > 1 && t.abs() < 1e-12 * sum.abs() {
            break;
        }
    }
    Ok(2.0 * PI * EPS_0 * sum)
}

/// Small-separation limit −πε₀R/z, kept for cross-checks.
pub fn proximity_coefficient(z: f64, radius: f64) -> f64 {
    -PI * EPS_0 * radius / z
}

/// z = z_piezo + m·s_def + z₀.
pub fn actual_separation(z_piezo: f64, s_def: f64, calib: &ElectrostaticCalib) -> Result<f64> {
    let z = z_piezo + calib.deflection_coeff_m * s_def + calib.contact_separation_z0;
    if !(z > 0.0) {
        return Err(Error::Geometry(format!(
            "reconstructed separation {z:e} m is not positive (surfaces in contact)"
        )));
    }
    Ok(z)
}

#[cfg(test)]
mod tests {
    use super::*;

    const R: f64 = 98.9e-6;

    // Image-charge series written out with the textbook cosh/sinh products,
    // summed to a fixed large order.
    fn brute(z: f64, radius: f64) -> f64 {
        let a = (1.0 + z / radius).acosh();
        let mut s = 0.0;
        for n in 1..4000 {
            let na = n as f64 * a;
            if na > 700.0 {
                break;
            }
            let num = a.cosh() * na.sinh() - n as f64 * na.cosh() * a.sinh();
            s += num / (a.sinh() * na.sinh() * na.sinh());
        }
        2.0 * PI * EPS_0 * s
    }

    #[test]
    fn matches_proximity_asymptote_at_small_ratio() {
        for z in [10e-9, 100e-9, 150e-9] {
            let c = electrostatic_coefficient(z, R).unwrap();
            let ratio = c / proximity_coefficient(z, R);
            assert!((ratio - 1.0).abs() < 2e-2, "z={z} ratio={ratio}");
        }
        let c = electrostatic_coefficient(100e-9, R).unwrap();
        assert!((c / -2.75e-8 - 1.0).abs() < 2e-2, "{c:e}");
        let tiny = electrostatic_coefficient(1e-10, R).unwrap();
        assert!((tiny / proximity_coefficient(1e-10, R) - 1.0).abs() < 1e-3);
    }

    #[test]
    fn departs_from_asymptote_at_large_ratio() {
        let z = 0.05 * R;
        let ratio = electrostatic_coefficient(z, R).unwrap() / proximity_coefficient(z, R);
        assert!((ratio - 1.0).abs() > 2e-2, "{ratio}");
    }

    #[test]
    fn agrees_with_direct_products() {
        for z in [1e-6, 3e-6, 5e-6, 20e-6] {
            let c = electrostatic_coefficient(z, R).unwrap();
            let b = brute(z, R);
            assert!((c / b - 1.0).abs() < 1e-10, "z={z} {c:e} {b:e}");
        }
    }

    #[test]
    fn negative_and_decreasing_in_magnitude() {
        let mut prev = f64::NEG_INFINITY;
        for i in 1..200 {
            let z = i as f64 * 25e-9;
            let c = electrostatic_coefficient(z, R).unwrap();
            assert!(c < 0.0);
            assert!(c > prev, "|c| must decrease at z={z}");
            prev = c;
        }
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(electrostatic_coefficient(R, R), Err(Error::Domain(_))));
        assert!(electrostatic_coefficient(0.0, R).is_err());
        assert!(electrostatic_coefficient(1e-7, -1.0).is_err());
    }

    #[test]
    fn separation_reconstruction() {
        let calib = ElectrostaticCalib::new(137.2e-9, 97e-9, -0.171, 6.16e-9).unwrap();
        assert_eq!(actual_separation(100e-9, 0.0, &calib).unwrap(), 100e-9 + 97e-9);
        let z = actual_separation(100e-9, -0.5, &calib).unwrap();
        assert!((z - 128.4e-9).abs() < 1e-18);
        let z1 = actual_separation(100e-9, -0.25, &calib).unwrap();
        assert!(((z + actual_separation(100e-9, 0.0, &calib).unwrap()) / 2.0 - z1).abs() < 1e-20);
        assert!(matches!(
            actual_separation(10e-9, -1.0, &calib),
            Err(Error::Geometry(_))
        ));
    }
}
