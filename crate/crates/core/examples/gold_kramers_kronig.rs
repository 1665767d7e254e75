//! Kramers-Kronig ε(iξ) of gold from a sampled Drude-Lorentz table, against
//! the analytic continuation of the same model.
//!
//! cargo run --release --example gold_kramers_kronig

use casimir_core::materials::{gold_drude_lorentz, kramers_kronig_transform_with, reference, ExtrapolationPolicy};

fn main() -> casimir_core::Result<()> {
    let model = gold_drude_lorentz();
    let table = model.table(reference::GOLD_TABLE_POINTS);
    let policy = ExtrapolationPolicy::drude(model.drude);
    eprintln!(
        "table: {} rows, {:.3e} to {:.3e} rad/s",
        table.rows().len(),
        table.omega_min(),
        table.omega_max()
    );
    println!("xi_rad_s,eps_kk,eps_analytic,rel_diff");
    for k in 0..=12 {
        let xi = 1e13 * 10f64.powf(k as f64 / 3.0);
        let kk = kramers_kronig_transform_with(&table, xi, &policy)?;
        let exact = model.eval_imaginary(xi);
        println!("{xi:.3e},{kk:.6e},{exact:.6e},{:.2e}", kk / exact - 1.0);
    }
    Ok(())
}
