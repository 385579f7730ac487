//! Relaxes saturn-ring and dipole seeds at a weak and a strong field and
//! compares the relaxed energies and defect structures.
//!
//! cargo run --release --example minimize_transition [-- xi n_r n_theta stretch]

use std::f64::consts::FRAC_PI_2;
use std::sync::Arc;

use nematic_colloid::analysis::detect_defects;
use nematic_colloid::energy::{build_mesh, minimize, MeshSpec, SolverOpts};
use nematic_colloid::error::Error;
use nematic_colloid::potentials::ModelParams;
use nematic_colloid::seed::{build_seed, Orientation, SeedSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    env_logger::init();
    let args: Vec<f64> = std::env::args().skip(1).map(|a| a.parse()).collect::<Result<_, _>>()?;
    let xi = args.first().copied().unwrap_or(0.05);
    let spec = MeshSpec {
        r_max: 8.0,
        n_r: args.get(1).map_or(128, |v| *v as usize),
        n_theta: args.get(2).map_or(96, |v| *v as usize),
        stretch: args.get(3).copied().unwrap_or(1.03),
    };
    let mesh = Arc::new(build_mesh(spec)?);
    for beta_s in [0.5, 2.2] {
        let params = ModelParams::new(1.0, 1.0, 1.0, Some(beta_s / 1.5), None, Some(xi))?;
        println!("βs* = {beta_s}, η = {:.4}, ξ = {xi}", params.eta);
        for (label, theta_d) in [("saturn", FRAC_PI_2), ("dipole", 0.0)] {
            let seed = SeedSpec::new(theta_d, params.eta, (xi / params.eta).min(0.25), Orientation::Up)?;
            let field = build_seed(mesh.clone(), &seed, params)?;
            let (relaxed, report) = match minimize(&field, &SolverOpts::default()) {
                Ok(v) => v,
                Err(Error::SolverStall(b)) => *b,
                Err(e) => return Err(e.into()),
            };
            let defects = detect_defects(&relaxed, 0.3)?;
            println!(
                "  {label:<7} E = {:.6} ({:?}, {} steps, {:.1}s)  {}  ring {:?}",
                report.final_energy,
                report.status,
                report.iterations,
                report.seconds,
                defects.classification,
                defects.ring_angle
            );
        }
    }
    Ok(())
}
