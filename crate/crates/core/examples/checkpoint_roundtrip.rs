//! Writes a field to CSV with its JSON sidecar, reads it back and verifies
//! the rewrite is byte-identical.
//!
//! cargo run --example checkpoint_roundtrip

use std::f64::consts::FRAC_PI_2;
use std::sync::Arc;

use nematic_colloid::energy::checkpoint::{meta_for, read_checkpoint, write_checkpoint};
use nematic_colloid::energy::{build_mesh, MeshSpec};
use nematic_colloid::potentials::ModelParams;
use nematic_colloid::seed::{build_seed, Orientation, SeedSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mesh = Arc::new(build_mesh(MeshSpec { r_max: 4.0, n_r: 48, n_theta: 36, stretch: 1.02 })?);
    let params = ModelParams::unit_material(1.0, 0.2)?;
    let field = build_seed(mesh, &SeedSpec::new(FRAC_PI_2, 0.2, 0.1, Orientation::Up)?, params)?;
    let dir = std::env::temp_dir();
    let (a, b) = (dir.join("roundtrip_a.csv"), dir.join("roundtrip_b.csv"));
    write_checkpoint(&field, &a, &meta_for(&field))?;
    let (back, meta) = read_checkpoint(&a)?;
    write_checkpoint(&back, &b, &meta)?;
    let same = std::fs::read(&a)? == std::fs::read(&b)?;
    println!("{} nodes, byte-identical rewrite: {same}", back.values.len());
    Ok(())
}
