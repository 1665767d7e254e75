//! Electrostatic calibration: synthetic force-distance curves at six applied
//! voltages, then the nonlinear fit of (m, z₀, V₀, k). The noise is an
//! absolute standard deviation in signal units.
//!
//! cargo run --release --example calibration_fit [-- noise seed]

use casimir_core::analysis::{fit_deflection_calibration, synthesize_calibration, ElectrostaticCalib};
use casimir_core::materials::reference;

fn main() -> casimir_core::Result<()> {
    let mut args = std::env::args().skip(1);
    let noise: f64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(1e-3);
    let seed: u64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(1);

    let truth = ElectrostaticCalib::new(137.2e-9, 97e-9, -0.171, 6.16e-9)?;
    let z_piezo: Vec<f64> = (0..41).map(|i| 0.9e-6 + 4e-6 * i as f64 / 40.0).collect();
    let voltages = [-0.9, -0.6, -0.4, 0.1, 0.3, 0.5];
    let points = synthesize_calibration(&truth, reference::SPHERE_RADIUS, &z_piezo, &voltages, noise, seed)?;

    let fit = fit_deflection_calibration(&points, reference::SPHERE_RADIUS)?;
    let (c, e) = (&fit.calib, &fit.std_errors);
    println!(
        "{} points, {} iterations, rss {:.3e}",
        fit.points, fit.iterations, fit.rss
    );
    println!(
        "m   = {:8.3} +- {:.3} nm   (true 137.2)",
        c.deflection_coeff_m * 1e9,
        e.deflection_coeff_m * 1e9
    );
    println!(
        "z0  = {:8.3} +- {:.3} nm   (true 97)",
        c.contact_separation_z0 * 1e9,
        e.contact_separation_z0 * 1e9
    );
    println!(
        "V0  = {:8.4} +- {:.4} V    (true -0.171)",
        c.residual_potential_v0, e.residual_potential_v0
    );
    println!(
        "k   = {:8.4} +- {:.4} nN   (true 6.16)",
        c.force_per_signal * 1e9,
        e.force_per_signal * 1e9
    );
    Ok(())
}
