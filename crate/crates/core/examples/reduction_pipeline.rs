//! Full reduction of synthetic data: truth curve, noisy ΔF_tot readings at 41
//! voltage pairs per separation, inversion and Student-t statistics.
//!
//! cargo run --release --example reduction_pipeline [-- noise_pN seed]

use casimir_core::analysis::{reduce_measurements, synthesize_measurements, voltage_pairs, Residuals};
use casimir_core::lifshitz::{force_curve, CurveRequest, HalfSpace, LifshitzConfig};
use casimir_core::materials::{build_material_profile, reference, MaterialProfile, ProfileInputs};

fn half_space(p: MaterialProfile) -> casimir_core::Result<HalfSpace> {
    Ok(HalfSpace::new(build_material_profile(p, &ProfileInputs::reference(p))?))
}

fn main() -> casimir_core::Result<()> {
    let mut args = std::env::args().skip(1);
    let noise = args.next().and_then(|s| s.parse::<f64>().ok()).unwrap_or(1.9) * 1e-12;
    let seed: u64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(42);

    let gold = half_space(MaterialProfile::GoldTabulated)?;
    let light = half_space(MaterialProfile::SiIlluminated)?;
    let dark = half_space(MaterialProfile::SiDarkDielectric)?;
    let grid: Vec<f64> = (0..9).map(|i| 100e-9 + 50e-9 * i as f64).collect();
    let req = CurveRequest::Difference {
        sphere: &gold,
        light: &light,
        dark: &dark,
    };
    let truth = force_curve(&grid, reference::SPHERE_RADIUS, &req, &LifshitzConfig::default())?;

    let residuals = Residuals {
        v0_light: -0.303,
        v0_dark: -0.225,
    };
    let pairs = voltage_pairs(41, &residuals, 0.05);
    let data = synthesize_measurements(&truth, &pairs, &residuals, noise, seed)?;
    let summary = reduce_measurements(&data, &residuals, reference::SPHERE_RADIUS, 0.95, 0.09e-12)?;

    println!("z_nm,truth_pN,mean_pN,random_pN,total_pN,t");
    for (s, &(_, f)) in summary.iter().zip(truth.points()) {
        println!(
            "{:.0},{:.3},{:.3},{:.3},{:.3},{:.4}",
            s.z * 1e9,
            f * 1e12,
            s.mean_delta_fd * 1e12,
            s.random_error * 1e12,
            s.total_error * 1e12,
            s.t_factor
        );
    }
    Ok(())
}
