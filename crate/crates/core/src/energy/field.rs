use std::sync::Arc;

use nalgebra::Vector3;
use rayon::prelude::*;

use super::mesh::Mesh;
use crate::error::{Error, Result};
use crate::potentials::ModelParams;
use crate::qtensor::QTensor;

/// Inner boundary datum `s*(x̂⊗x̂ − Id/3)`, `x̂ = (sin θ, 0, cos θ)`.
pub fn inner_boundary(theta: f64, s_star: f64) -> QTensor {
    QTensor::meridional(theta, s_star)
}

/// Far-field value `s*(e3⊗e3 − Id/3)`.
pub fn far_field(s_star: f64) -> QTensor {
    QTensor::uniaxial_unchecked(&Vector3::z(), s_star)
}

/// Keeps only the `e3`-uniaxial component, the form forced on the symmetry axis.
#[inline]
pub fn axis_projection(q: &QTensor) -> QTensor {
    QTensor::new([0.0, 0.0, 0.0, 0.0, q.coords[4]])
}

/// One tensor per node of a meridional mesh.
#[derive(Clone, Debug)]
pub struct Field2D {
    pub mesh: Arc<Mesh>,
    pub params: ModelParams,
    pub values: Vec<QTensor>,
}

impl Field2D {
    /// Samples `f(r, θ)` at every interior node and imposes the boundary
    /// conditions.
    pub fn from_fn<F>(mesh: Arc<Mesh>, params: ModelParams, f: F) -> Self
    where
        F: Fn(f64, f64) -> QTensor + Sync,
    {
        let values = (0..mesh.len())
            .into_par_iter()
            .map(|n| {
                let (i, j) = mesh.coords(n);
                f(mesh.r[i], mesh.theta[j])
            })
            .collect();
        let mut field = Field2D {
            mesh,
            params,
            values,
        };
        field.apply_boundary();
        field
    }

    /// The far-field constant with boundary conditions imposed.
    pub fn preferred(mesh: Arc<Mesh>, params: ModelParams) -> Self {
        let q = far_field(params.s_star);
        Self::from_fn(mesh, params, |_, _| q)
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &QTensor {
        &self.values[self.mesh.index(i, j)]
    }

    /// Expected Dirichlet value at node `n`, if it is a Dirichlet node.
    pub fn boundary_value(&self, n: usize) -> Option<QTensor> {
        let (i, j) = self.mesh.coords(n);
        if i == 0 {
            Some(inner_boundary(self.mesh.theta[j], self.params.s_star))
        } else if i + 1 == self.mesh.n_r() {
            Some(far_field(self.params.s_star))
        } else {
            None
        }
    }

    /// Imposes the Dirichlet data and the axis constraint.
    pub fn apply_boundary(&mut self) {
        let s = self.params.s_star;
        let nt = self.mesh.n_theta();
        let nr = self.mesh.n_r();
        for j in 0..nt {
            self.values[j] = inner_boundary(self.mesh.theta[j], s);
            self.values[(nr - 1) * nt + j] = far_field(s);
        }
        for i in 1..nr - 1 {
            for j in [0, nt - 1] {
                let n = i * nt + j;
                self.values[n] = axis_projection(&self.values[n]);
            }
        }
    }

    /// Largest deviation from the boundary invariants.
    pub fn boundary_deviation(&self) -> (usize, f64) {
        let mut worst = (0, 0.0);
        for n in 0..self.values.len() {
            let dev = if let Some(b) = self.boundary_value(n) {
                self.values[n].max_abs_diff(&b)
            } else if self.mesh.is_axis(n) {
                self.values[n].coords[..4].iter().fold(0.0f64, |m, v| m.max(v.abs()))
            } else {
                0.0
            };
            if dev > worst.1 {
                worst = (n, dev);
            }
        }
        worst
    }

    /// Errors when a boundary invariant is violated by more than `tol`.
    pub fn check_boundary(&self, tol: f64) -> Result<()> {
        let (n, dev) = self.boundary_deviation();
        if dev > tol {
            let (i, j) = self.mesh.coords(n);
            return Err(Error::BoundaryViolation { i, j, deviation: dev });
        }
        Ok(())
    }

    pub fn max_norm(&self) -> f64 {
        self.values.iter().map(QTensor::norm).fold(0.0, f64::max)
    }

    /// Biaxiality `φ` at every node.
    pub fn biaxiality(&self) -> Vec<f64> {
        let s = self.params.s_star;
        self.values.par_iter().map(|q| q.biaxiality_phi(s)).collect()
    }
}
