//! ε(iξ) of the four material profiles on a log grid from 10¹² to 10¹⁷ rad/s.
//!
//! cargo run --release --example permittivity_spectra

use casimir_core::materials::{build_material_profile, MaterialProfile, ProfileInputs};

fn main() -> casimir_core::Result<()> {
    let models = MaterialProfile::ALL
        .iter()
        .map(|&p| build_material_profile(p, &ProfileInputs::reference(p)))
        .collect::<casimir_core::Result<Vec<_>>>()?;

    print!("xi_rad_s");
    for p in MaterialProfile::ALL {
        print!(",{}", p.name());
    }
    println!();
    for k in 0..=25 {
        let xi = 1e12 * 10f64.powf(k as f64 / 5.0);
        print!("{xi:.3e}");
        for m in &models {
            print!(",{:.6e}", m.eval(xi)?);
        }
        println!();
    }
    for m in &models {
        match m.static_permittivity()? {
            Some(e0) => eprintln!("{}: eps(0) = {e0}", m.label()),
            None => eprintln!("{}: eps diverges at zero frequency", m.label()),
        }
    }
    Ok(())
}
