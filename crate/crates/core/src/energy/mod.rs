//! The equivariant energy reduced to the meridional half plane, its
//! discretization on a polar mesh, and a gradient-flow minimizer.

mod assemble;
pub mod checkpoint;
mod field;
mod mesh;
pub mod planar;
mod solver;

pub use assemble::{
    assemble_energy, assemble_energy_unchecked, assemble_gradient, energy_parts, grad_norm,
    gradient, total_energy, EnergyBreakdown, BOUNDARY_TOL,
};
pub use field::{axis_projection, far_field, inner_boundary, Field2D};
pub use mesh::{build_mesh, radial_nodes, Mesh, MeshSpec};
pub use solver::{minimize, minimize_unchecked, ConvergenceReport, SolverOpts, SolverStatus};
