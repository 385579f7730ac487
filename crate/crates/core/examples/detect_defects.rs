//! Defect detection on constructed fields with the interface at several
//! angles.
//!
//! cargo run --release --example detect_defects

use std::f64::consts::FRAC_PI_2;
use std::sync::Arc;

use nematic_colloid::analysis::{compare_to_limit, detect_defects};
use nematic_colloid::energy::{build_mesh, MeshSpec};
use nematic_colloid::potentials::ModelParams;
use nematic_colloid::seed::{build_seed, Orientation, SeedSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mesh = Arc::new(build_mesh(MeshSpec::default())?);
    let params = ModelParams::unit_material(1.0, 0.1)?;
    for theta_d in [0.0, 0.3, FRAC_PI_2, 2.5] {
        let spec = SeedSpec::new(theta_d, params.eta, 0.1, Orientation::Up)?;
        let field = build_seed(mesh.clone(), &spec, params)?;
        let report = detect_defects(&field, 0.3)?;
        print!("θ_d = {theta_d:.3}: {} ", report.classification);
        for d in &report.defects {
            print!("[r {:.3}, θ {:.3}, min φ {:.3}] ", d.r, d.theta, d.min_phi);
        }
        match compare_to_limit(&report, &params) {
            Ok(c) => println!("η·E {:.3} vs E0 {:.3}", c.scaled_energy, c.limit_energy),
            Err(e) => println!("({e})"),
        }
    }
    Ok(())
}
