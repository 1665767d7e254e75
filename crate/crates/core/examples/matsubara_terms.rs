//! Term-by-term Matsubara contributions for gold against each silicon
//! profile. Only the j = 0 term sees the dark-phase zero-frequency model;
//! an r_TE(0) override changes nothing beyond it.
//!
//! cargo run --release --example matsubara_terms [-- z_nm]

use casimir_core::lifshitz::{free_energy_breakdown, HalfSpace, LifshitzConfig};
use casimir_core::materials::{build_material_profile, MaterialProfile, ProfileInputs};

fn half_space(p: MaterialProfile) -> casimir_core::Result<HalfSpace> {
    Ok(HalfSpace::new(build_material_profile(p, &ProfileInputs::reference(p))?))
}

fn main() -> casimir_core::Result<()> {
    let z = std::env::args()
        .nth(1)
        .and_then(|s| s.parse::<f64>().ok())
        .unwrap_or(100.0)
        * 1e-9;
    let gold = half_space(MaterialProfile::GoldTabulated)?;
    let cfg = LifshitzConfig::default();

    for p in [
        MaterialProfile::SiDarkDielectric,
        MaterialProfile::SiDarkWithDc,
        MaterialProfile::SiIlluminated,
    ] {
        let b = free_energy_breakdown(z, &gold, &half_space(p)?, &cfg)?;
        let total: f64 = b.terms.iter().map(|t| t.total()).sum();
        println!(
            "{} at {:.0} nm: {} terms, E = {total:.6e} J/m^2",
            p.name(),
            z * 1e9,
            b.terms.len()
        );
        for t in b.terms.iter().take(4) {
            println!("  j = {:<3} xi = {:.3e}  TM {:+.4e}  TE {:+.4e}", t.j, t.xi, t.tm, t.te);
        }
    }

    // Plasma-like TE reflection at zero frequency, imposed on both sides.
    let light = half_space(MaterialProfile::SiIlluminated)?;
    let a = free_energy_breakdown(z, &gold, &light, &cfg)?;
    let b = free_energy_breakdown(
        z,
        &gold.clone().with_zero_frequency_te(1.0),
        &light.with_zero_frequency_te(1.0),
        &cfg,
    )?;
    println!("r_TE(0) = 1: j = 0 TE {:+.4e} -> {:+.4e}", a.terms[0].te, b.terms[0].te);
    println!("j = 1 unchanged: {}", a.terms[1] == b.terms[1]);
    Ok(())
}
