//! The optimal radial profile: closed form, Simpson quadrature and a direct
//! discrete minimization of the same functional.
//!
//! cargo run --example radial_profile

use std::f64::consts::PI;

use nematic_colloid::profile::{closed_form_i, minimize_i, optimal_point, quadrature_i, ProfileSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let s = 1.0;
    println!("{:>8} {:>14} {:>14} {:>10}", "θ", "closed form", "quadrature", "|diff|");
    for k in 1..8 {
        let theta = PI * k as f64 / 8.0;
        let spec = ProfileSpec::new(theta, s, 1)?;
        let q = quadrature_i(&spec)?;
        println!("{theta:8.4} {:14.9} {:14.9} {:10.2e}", closed_form_i(theta, 1, s), q.value, (q.value - q.closed_form).abs());
    }
    let spec = ProfileSpec::new(PI / 2.0, s, 1)?;
    println!("\nprofile at θ = π/2:");
    for t in [0.0, 0.25, 0.5, 1.0, 2.0, 4.0] {
        let p = optimal_point(t, &spec);
        println!("  t = {t:4.2}  n3 = {:.6}  kinetic {:.3e}  potential {:.3e}", p.n3, p.kinetic(s), p.potential());
    }
    let full = minimize_i(0.0, 40.0, -1.0, 1.0, s, 4000)?;
    println!("\nfull turn from −1 to +1 on [0, 40]: I = {:.6} (bound 2·⁴√24 = {:.6})", full.value, 2.0 * 24f64.powf(0.25));
    Ok(())
}
