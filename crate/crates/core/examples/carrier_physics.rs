//! Photo-excited carrier density and the resulting plasma frequencies.
//!
//! cargo run --example carrier_physics [-- absorbed_power_mW]

use casimir_core::materials::{carrier_density_from_illumination, plasma_frequency, reference, CarrierSpec};

fn main() -> casimir_core::Result<()> {
    let mut light = reference::illumination();
    if let Some(p) = std::env::args().nth(1).and_then(|s| s.parse::<f64>().ok()) {
        light.absorbed_power = p * 1e-3;
    }
    let n = carrier_density_from_illumination(&light)?;
    println!("absorbed power   {:.2} mW", light.absorbed_power * 1e3);
    println!("carrier density  {:.4e} cm^-3", n * 1e-6);

    for (name, mass_ratio) in [
        ("holes", reference::MASS_RATIO_HOLE),
        ("electrons", reference::MASS_RATIO_ELECTRON),
    ] {
        let wp = plasma_frequency(&CarrierSpec { density: n, mass_ratio })?;
        println!("{name:<16} omega_p = {wp:.4e} rad/s");
    }
    let dark = plasma_frequency(&CarrierSpec {
        density: reference::DARK_DENSITY,
        mass_ratio: reference::MASS_RATIO_HOLE,
    })?;
    println!("dark holes       omega_p = {dark:.4e} rad/s");
    Ok(())
}
