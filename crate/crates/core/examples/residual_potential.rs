//! Residual potential from the vertex of the electrostatic force parabola,
//! for the dark and bright phases at a few separations.
//!
//! cargo run --example residual_potential

use casimir_core::analysis::{electrostatic_coefficient, fit_parabola_extremum, proximity_coefficient};
use casimir_core::materials::reference;

fn main() -> casimir_core::Result<()> {
    let r = reference::SPHERE_RADIUS;
    for z_nm in [100.0, 200.0, 500.0] {
        let z = z_nm * 1e-9;
        let c = electrostatic_coefficient(z, r)?;
        println!(
            "z = {z_nm} nm: c = {c:.4e} N/V^2 (proximity {:.4e})",
            proximity_coefficient(z, r)
        );
        for (phase, v0) in [("dark", -0.225), ("light", -0.303)] {
            // A constant offset stands in for the dispersion force.
            let sweep: Vec<(f64, f64)> = (0..11)
                .map(|i| {
                    let v = v0 - 0.25 + 0.05 * i as f64;
                    (v, c * (v - v0) * (v - v0) - 3e-12)
                })
                .collect();
            let fit = fit_parabola_extremum(&sweep)?;
            println!(
                "  {phase:<5} V0 = {:+.6} V, curvature {:.4e}",
                fit.v_star, fit.curvature
            );
        }
    }
    Ok(())
}
