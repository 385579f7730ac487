//! Builds the constructed saturn-ring field, reports its energy split and
//! writes it as a checkpoint.
//!
//! cargo run --release --example seed_field

use std::f64::consts::FRAC_PI_2;
use std::sync::Arc;

use nematic_colloid::energy::checkpoint::{meta_for, write_checkpoint};
use nematic_colloid::energy::{assemble_energy, build_mesh, MeshSpec};
use nematic_colloid::limit::limit_energy;
use nematic_colloid::potentials::ModelParams;
use nematic_colloid::seed::{build_seed, Orientation, SeedSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mesh = Arc::new(build_mesh(MeshSpec { r_max: 8.0, n_r: 256, n_theta: 192, stretch: 1.015 })?);
    for eta in [0.2, 0.1, 0.05] {
        let params = ModelParams::unit_material(0.5 / 1.5, eta)?;
        let spec = SeedSpec::new(FRAC_PI_2, eta, (params.xi / eta).min(0.25), Orientation::Up)?;
        let field = build_seed(mesh.clone(), &spec, params)?;
        let e = assemble_energy(&field)?;
        let e0 = limit_energy(FRAC_PI_2, params.beta, params.s_star);
        println!(
            "η = {eta:<5} η·E = {:8.4}  E0 = {e0:.4}  (elastic {:.3} + {:.3}, bulk {:.3}, field {:.3})",
            eta * e.total,
            eta * e.elastic_meridional,
            eta * e.elastic_azimuthal,
            eta * e.bulk,
            eta * e.field
        );
        if eta == 0.1 {
            let path = std::env::temp_dir().join("saturn_seed.csv");
            write_checkpoint(&field, &path, &meta_for(&field))?;
            println!("  written to {}", path.display());
        }
    }
    Ok(())
}
