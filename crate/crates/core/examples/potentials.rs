//! Bulk and field potentials on a few representative tensors.
//!
//! cargo run --example potentials

use nalgebra::Vector3;
use nematic_colloid::potentials::{bulk_f, field_g, ModelParams};
use nematic_colloid::qtensor::QTensor;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let p = ModelParams::unit_material(1.0, 0.2)?;
    println!("a = b = c = 1: s* = {:.6}, C = {:.6}", p.s_star, p.c_const);
    let cases = [
        ("preferred e3", QTensor::from_director(&Vector3::z(), p.s_star)?),
        ("uniaxial e1", QTensor::from_director(&Vector3::x(), p.s_star)?),
        ("half order e3", QTensor::from_director(&Vector3::z(), 0.5 * p.s_star)?),
        ("isotropic", QTensor::ZERO),
        ("oblate e3", QTensor::from_director(&Vector3::z(), -0.5 * p.s_star)?),
    ];
    for (name, q) in cases {
        let sd = q.spectral();
        println!(
            "{name:<14} f = {:.6}  g = {:.6}  φ = {:.4}  λ = {:.4?}",
            bulk_f(&q, &p),
            field_g(&q),
            q.biaxiality_phi(p.s_star),
            sd.lambda
        );
    }
    Ok(())
}
