//! Brute-force search over sets made of up to two latitude bands: splitting
//! F never pays off.
//!
//! cargo run --example band_sets

use nematic_colloid::limit::best_band_set;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for bs in [0.0, 0.5, 1.409, 2.0, 2.818, 4.0] {
        let zero = best_band_set(0, bs, 1.0, 1)?;
        let one = best_band_set(1, bs, 1.0, 1)?;
        let two = best_band_set(2, bs, 1.0, 1)?;
        println!(
            "βs* = {bs:<5}  no interface {:.4}  one {:.4} at {:?}  two {:.4}",
            zero.energy,
            one.energy,
            one.interfaces.iter().map(|t| t.to_degrees().round()).collect::<Vec<_>>(),
            two.energy
        );
    }
    Ok(())
}
