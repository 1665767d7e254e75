//! Perfect reflectors through the general Matsubara machinery, compared with
//! the polylogarithm closed form and the zero-temperature limit.
//!
//! cargo run --release --example ideal_metal

use casimir_core::lifshitz::{
    free_energy_per_area, ideal_metal_reference, ideal_metal_zero_temperature, HalfSpace, LifshitzConfig,
};
use casimir_core::materials::PermittivityModel;

fn main() -> casimir_core::Result<()> {
    let metal = HalfSpace::new(PermittivityModel::perfect_reflector());
    let cfg = LifshitzConfig::default();
    println!("z_nm,E_lifshitz,E_polylog,E_T0,rel_diff");
    for z_nm in [50.0, 100.0, 200.0, 500.0, 1000.0, 3000.0, 7000.0] {
        let z = z_nm * 1e-9;
        let e = free_energy_per_area(z, &metal, &metal, &cfg)?;
        let oracle = ideal_metal_reference(z, cfg.temperature)?;
        let cold = ideal_metal_zero_temperature(z);
        println!("{z_nm},{e:.6e},{oracle:.6e},{cold:.6e},{:.1e}", e / oracle - 1.0);
    }
    Ok(())
}
