//! Planar Dirichlet energy of the half-charge core map against
//! (π/2) s*² (|ln ε| − ln 2).
//!
//! cargo run --release --example defect_core_energy

use std::f64::consts::FRAC_PI_2;

use nematic_colloid::checks::core_energy;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let s = 1.0;
    for eps in [1e-1f64, 1e-2, 1e-3, 1e-4] {
        let law = FRAC_PI_2 * s * s * (eps.ln().abs() - 2f64.ln());
        let outer = core_energy(eps, 2.0 * eps, 1024, s)?;
        let full = core_energy(eps, eps, 1024, s)?;
        println!(
            "ε = {eps:.0e}: [2ε,1] {outer:.5} vs law {law:.5} ({:+.3}%), [ε,1] {full:.5}",
            100.0 * (outer - law) / law
        );
    }
    Ok(())
}
