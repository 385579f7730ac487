//! Runs the invariant suites programmatically, including a fault-injected
//! run that must fail.
//!
//! cargo run --release --example invariant_checks

use nematic_colloid::checks::{format_table, run_checks, CheckOptions, Suite};

fn main() {
    let quick = CheckOptions {
        only: vec![Suite::Qtensor, Suite::Potentials, Suite::Limit],
        samples: 5_000,
        ..CheckOptions::default()
    };
    print!("{}", format_table(&run_checks(&quick)));
    let faulty = CheckOptions {
        inject_fault: true,
        ..quick
    };
    let failed = run_checks(&faulty).iter().filter(|o| !o.passed).count();
    println!("with an injected fault: {failed} checks fail");
}
