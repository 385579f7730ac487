//! Loads a TOML run configuration, derives the missing regime parameter and
//! writes the seed described by it.
//!
//! cargo run --release --example run_config

use std::sync::Arc;

use nematic_colloid::config::RunConfig;
use nematic_colloid::energy::build_mesh;
use nematic_colloid::seed::{build_seed, SeedSpec};

const CONFIG: &str = r#"
[material]
a = 1.0
b = 1.0
c = 1.0

[regime]
beta = 0.3333333333333333
xi = 0.05

[mesh]
r_max = 8.0
n_r = 128
n_theta = 96
stretch = 1.03

[seed]
type = "interface"
theta_d = 1.2

[solver]
tol = 1e-3
max_iter = 50000
"#;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = RunConfig::from_toml(CONFIG)?;
    let p = cfg.params()?;
    println!("s* = {:.6}, β = {:.6}, η = {:.6}, ξ = {:.6}", p.s_star, p.beta, p.eta, p.xi);
    let theta_d = cfg.theta_d()?.expect("constructed seed");
    let spec = SeedSpec::new(theta_d, p.eta, cfg.epsilon(&p), cfg.seed.orientation)?;
    let field = build_seed(Arc::new(build_mesh(cfg.mesh)?), &spec, p)?;
    println!("seed with {} nodes, max |Q| = {:.6}", field.values.len(), field.max_norm());
    Ok(())
}
