pub mod analysis;
pub mod checks;
pub mod cli;
pub mod config;
pub mod energy;
pub mod error;
pub mod limit;
pub mod potentials;
pub mod profile;
pub mod qtensor;
pub mod seed;
