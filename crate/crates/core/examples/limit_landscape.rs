//! Limit energy of a single interface at θ_d for several field strengths,
//! with its stationary points.
//!
//! cargo run --example limit_landscape

use nematic_colloid::limit::{critical_betas, landscape, stationary_angles};

fn main() {
    let s_star = 1.0;
    let (beta_equal, beta_spinodal) = critical_betas(s_star);
    println!("β s* where SR and DP cost the same: {beta_equal:.6}");
    println!("β s* where the SR minimum disappears: {beta_spinodal:.6}");
    for beta in [0.0, 1.0, beta_equal, 2.0, beta_spinodal, 3.0] {
        println!("\nβ = {beta:.4}");
        for p in stationary_angles(beta, s_star) {
            println!("  θ = {:.4}  E0 = {:.4}  {:?}", p.theta, p.energy, p.kind);
        }
        let coarse: Vec<String> = landscape(beta, s_star, 8)
            .iter()
            .map(|(_, e)| format!("{e:.2}"))
            .collect();
        println!("  E0 on θ = 0, π/8, …, π: {}", coarse.join(" "));
    }
}
