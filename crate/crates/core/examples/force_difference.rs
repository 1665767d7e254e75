//! ΔF_d(z) between the illuminated and dark plate for both dark models,
//! over the experimental 100 to 500 nm window at 3 points per nm.
//!
//! cargo run --release --example force_difference [-- points]

use std::time::Instant;

use casimir_core::lifshitz::{force_curve, CurveRequest, HalfSpace, LifshitzConfig};
use casimir_core::materials::{build_material_profile, reference, MaterialProfile, ProfileInputs};

fn half_space(p: MaterialProfile) -> casimir_core::Result<HalfSpace> {
    Ok(HalfSpace::new(build_material_profile(p, &ProfileInputs::reference(p))?))
}

fn main() -> casimir_core::Result<()> {
    let n: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(1201);
    let grid: Vec<f64> = (0..n)
        .map(|i| 100e-9 + 400e-9 * i as f64 / (n.max(2) - 1) as f64)
        .collect();
    let gold = half_space(MaterialProfile::GoldTabulated)?;
    let light = half_space(MaterialProfile::SiIlluminated)?;
    let cfg = LifshitzConfig::default();

    let mut curves = Vec::new();
    for dark_profile in [MaterialProfile::SiDarkDielectric, MaterialProfile::SiDarkWithDc] {
        let dark = half_space(dark_profile)?;
        let t = Instant::now();
        let req = CurveRequest::Difference {
            sphere: &gold,
            light: &light,
            dark: &dark,
        };
        let curve = force_curve(&grid, reference::SPHERE_RADIUS, &req, &cfg)?;
        eprintln!("{}: {n} points in {:.1?}", dark_profile.name(), t.elapsed());
        curves.push(curve);
    }

    println!("z_nm,dF_dielectric_pN,dF_with_dc_pN");
    let step = (n / 20).max(1);
    let mut rows: Vec<usize> = (0..n).step_by(step).collect();
    if rows.last() != Some(&(n - 1)) {
        rows.push(n - 1);
    }
    for i in rows {
        let (z, a) = curves[0].points()[i];
        let b = curves[1].points()[i].1;
        println!("{:.2},{:.5},{:.5}", z * 1e9, a * 1e12, b * 1e12);
    }
    Ok(())
}
