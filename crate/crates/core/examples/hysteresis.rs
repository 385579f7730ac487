//! Quasi-static sweeps of β in both directions showing the two different
//! transition points.
//!
//! cargo run --example hysteresis

use nematic_colloid::limit::{critical_betas, hysteresis_sweep, Branch};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let s_star = 1.0;
    let down = hysteresis_sweep(3.0, 0.0, 300, s_star, Branch::DP)?;
    let up = hysteresis_sweep(0.0, 3.5, 350, s_star, Branch::SR)?;
    for (label, trace) in [("decreasing β from DP", &down), ("increasing β from SR", &up)] {
        println!("{label}:");
        for r in trace.jumps() {
            println!("  jump at β = {:.3} to θ_d = {:.4} ({})", r.beta, r.theta_d, r.branch);
        }
    }
    println!("spinodal value {:.6}", critical_betas(s_star).1);
    let path = std::env::temp_dir().join("hysteresis_up.csv");
    std::fs::write(&path, up.to_csv())?;
    println!("ascending trace written to {}", path.display());
    Ok(())
}
