use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::field::Field2D;
use super::mesh::Mesh;
use crate::error::Result;
use crate::potentials::{bulk_f, bulk_grad, field_g, field_grad_unchecked, ModelParams, G_NORM_FLOOR};
use crate::qtensor::QTensor;

/// Boundary tolerance used by the checked assembly entry points.
pub const BOUNDARY_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct EnergyBreakdown {
    pub elastic_meridional: f64,
    pub elastic_azimuthal: f64,
    pub bulk: f64,
    pub field: f64,
    pub total: f64,
    pub grad_norm: f64,
}

/// Per-node energy contributions; edges are split evenly between endpoints.
#[inline]
fn node_parts(mesh: &Mesh, p: &ModelParams, q: &[QTensor], n: usize) -> [f64; 4] {
    let nt = mesh.n_theta();
    let (i, j) = mesh.coords(n);
    let qn = &q[n];
    let mut mer = 0.0;
    if i > 0 {
        mer += mesh.coef_r[n - nt] * (*qn - q[n - nt]).norm_sq();
    }
    if i + 1 < mesh.n_r() {
        mer += mesh.coef_r[n] * (*qn - q[n + nt]).norm_sq();
    }
    if j > 0 {
        mer += mesh.coef_theta[n - 1] * (*qn - q[n - 1]).norm_sq();
    }
    if j + 1 < nt {
        mer += mesh.coef_theta[n] * (*qn - q[n + 1]).norm_sq();
    }
    let m = mesh.mass[n];
    [
        0.5 * mer,
        mesh.azimuthal[n] * qn.azimuthal_grad_sq(),
        m / (p.xi * p.xi) * bulk_f(qn, p),
        m / (p.eta * p.eta) * field_g(qn),
    ]
}

/// Gradient of the discrete energy at node `n`, restricted to its admissible
/// subspace.
#[inline]
fn node_gradient(mesh: &Mesh, p: &ModelParams, q: &[QTensor], n: usize) -> QTensor {
    if mesh.is_dirichlet(n) {
        return QTensor::ZERO;
    }
    let nt = mesh.n_theta();
    let (i, j) = mesh.coords(n);
    let qn = q[n];
    let mut g = QTensor::ZERO;
    g += (qn - q[n - nt]) * (2.0 * mesh.coef_r[n - nt]);
    g += (qn - q[n + nt]) * (2.0 * mesh.coef_r[n]);
    if j > 0 {
        g += (qn - q[n - 1]) * (2.0 * mesh.coef_theta[n - 1]);
    }
    if j + 1 < nt {
        g += (qn - q[n + 1]) * (2.0 * mesh.coef_theta[n]);
    }
    let m = mesh.mass[n];
    g += qn.azimuthal_grad_sq_gradient() * mesh.azimuthal[n];
    g += bulk_grad(&qn, p) * (m / (p.xi * p.xi));
    let norm = qn.norm();
    if norm >= G_NORM_FLOOR * p.s_star {
        g += field_grad_unchecked(&qn, norm) * (m / (p.eta * p.eta));
    }
    debug_assert!(i > 0);
    if j == 0 || j + 1 == nt {
        QTensor::new([0.0, 0.0, 0.0, 0.0, g.coords[4]])
    } else {
        g
    }
}

/// `[meridional, azimuthal, bulk, field]` for raw node values.
pub fn energy_parts(mesh: &Mesh, p: &ModelParams, q: &[QTensor]) -> [f64; 4] {
    let per_node: Vec<[f64; 4]> = (0..mesh.len())
        .into_par_iter()
        .map(|n| node_parts(mesh, p, q, n))
        .collect();
    // fixed summation order keeps results independent of the thread count
    per_node.iter().fold([0.0; 4], |acc, x| {
        [acc[0] + x[0], acc[1] + x[1], acc[2] + x[2], acc[3] + x[3]]
    })
}

pub fn total_energy(mesh: &Mesh, p: &ModelParams, q: &[QTensor]) -> f64 {
    energy_parts(mesh, p, q).iter().sum()
}

/// Gradient of the discrete energy with respect to every node value.
pub fn gradient(mesh: &Mesh, p: &ModelParams, q: &[QTensor]) -> Vec<QTensor> {
    (0..mesh.len())
        .into_par_iter()
        .map(|n| node_gradient(mesh, p, q, n))
        .collect()
}

/// `√(Σ |g_n|² / m_n)` over free nodes: the mass-weighted residual norm.
pub fn grad_norm(mesh: &Mesh, g: &[QTensor]) -> f64 {
    g.iter()
        .zip(&mesh.mass)
        .map(|(g, m)| if *m > 0.0 { g.norm_sq() / m } else { 0.0 })
        .sum::<f64>()
        .sqrt()
}

/// Energy breakdown without checking boundary invariants.
pub fn assemble_energy_unchecked(field: &Field2D) -> EnergyBreakdown {
    let parts = energy_parts(&field.mesh, &field.params, &field.values);
    let g = gradient(&field.mesh, &field.params, &field.values);
    EnergyBreakdown {
        elastic_meridional: parts[0],
        elastic_azimuthal: parts[1],
        bulk: parts[2],
        field: parts[3],
        total: parts.iter().sum(),
        grad_norm: grad_norm(&field.mesh, &g),
    }
}

/// Energy breakdown of a field that satisfies the boundary invariants.
pub fn assemble_energy(field: &Field2D) -> Result<EnergyBreakdown> {
    field.check_boundary(BOUNDARY_TOL)?;
    Ok(assemble_energy_unchecked(field))
}

/// Gradient of a field that satisfies the boundary invariants.
pub fn assemble_gradient(field: &Field2D) -> Result<Vec<QTensor>> {
    field.check_boundary(BOUNDARY_TOL)?;
    Ok(gradient(&field.mesh, &field.params, &field.values))
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;
    use std::sync::Arc;

    use nalgebra::Vector3;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::energy::field::far_field;
    use crate::energy::mesh::{build_mesh, MeshSpec};
    use crate::error::Error;

    fn small_mesh() -> Arc<Mesh> {
        Arc::new(
            build_mesh(MeshSpec {
                r_max: 3.0,
                n_r: 16,
                n_theta: 12,
                stretch: 1.05,
            })
            .unwrap(),
        )
    }

    fn params() -> ModelParams {
        ModelParams::unit_material(0.5, 0.2).unwrap()
    }

    fn random_field(seed: u64) -> Field2D {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mesh = small_mesh();
        let p = params();
        let noise: Vec<QTensor> = (0..mesh.len())
            .map(|_| QTensor::new(std::array::from_fn(|_| rng.gen_range(-0.3..0.3))))
            .collect();
        let mut f = Field2D::preferred(mesh.clone(), p);
        for (v, e) in f.values.iter_mut().zip(noise) {
            *v += e;
        }
        f.apply_boundary();
        f
    }

    #[test]
    fn preferred_state_with_matching_boundary_is_zero() {
        let mesh = small_mesh();
        let p = params();
        let q = far_field(p.s_star);
        let values = vec![q; mesh.len()];
        let f = Field2D {
            mesh,
            params: p,
            values,
        };
        let e = assemble_energy_unchecked(&f);
        assert!(e.total.abs() < 1e-9);
        assert!(e.elastic_meridional.abs() < 1e-12 && e.elastic_azimuthal.abs() < 1e-12);
        assert!(e.bulk.abs() < 1e-10 && e.field.abs() < 1e-12);
        assert!(e.grad_norm < 1e-10);
    }

    #[test]
    fn horizontal_constant_matches_loop_oracle() {
        let mesh = small_mesh();
        let p = params();
        let q = QTensor::from_director(&Vector3::x(), p.s_star).unwrap();
        let f = Field2D {
            mesh: mesh.clone(),
            params: p,
            values: vec![q; mesh.len()],
        };
        let e = assemble_energy_unchecked(&f);
        // independent cell-by-cell sums in the opposite loop order
        let (nr, nt) = (mesh.n_r(), mesh.n_theta());
        let dth = PI / (nt - 1) as f64;
        let (mut vol, mut az) = (0.0, 0.0);
        for j in 0..nt - 1 {
            for i in 0..nr - 1 {
                let dr = mesh.r[i + 1] - mesh.r[i];
                let rc = 0.5 * (mesh.r[i] + mesh.r[i + 1]);
                let rho = rc * ((j as f64 + 0.5) * dth).sin();
                let w = 2.0 * PI * rho * rc * dr * dth;
                vol += w;
                az += w / (2.0 * rho * rho) * q.azimuthal_grad_sq();
            }
        }
        assert!(e.bulk.abs() < 1e-10);
        assert!(e.elastic_meridional.abs() < 1e-12);
        let field_oracle = 1.5f64.sqrt() * vol / (p.eta * p.eta);
        assert!((e.field - field_oracle).abs() < 1e-10 * field_oracle);
        assert!((e.elastic_azimuthal - az).abs() < 1e-10 * az);
        // |∂_φ Q|² = 2 s*² for a horizontal director
        assert!((q.azimuthal_grad_sq() - 2.0 * p.s_star * p.s_star).abs() < 1e-12);
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let f = random_field(21);
        let g = assemble_gradient(&f).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        let mut dir: Vec<QTensor> = (0..f.values.len())
            .map(|_| QTensor::new(std::array::from_fn(|_| rng.gen_range(-1.0..1.0))))
            .collect();
        for (n, d) in dir.iter_mut().enumerate() {
            if f.mesh.is_dirichlet(n) {
                *d = QTensor::ZERO;
            } else if f.mesh.is_axis(n) {
                *d = crate::energy::field::axis_projection(d);
            }
        }
        let h = 1e-6;
        let shifted = |t: f64| -> f64 {
            let v: Vec<QTensor> = f.values.iter().zip(&dir).map(|(q, d)| *q + *d * t).collect();
            total_energy(&f.mesh, &f.params, &v)
        };
        let fd = (shifted(h) - shifted(-h)) / (2.0 * h);
        let an: f64 = g.iter().zip(&dir).map(|(a, b)| a.dot(b)).sum();
        assert!((fd - an).abs() <= 1e-6 * an.abs(), "fd {fd} analytic {an}");
    }

    #[test]
    fn gradient_is_local() {
        let mesh = small_mesh();
        let p = params();
        let mut f = Field2D::preferred(mesh.clone(), p);
        let base = gradient(&mesh, &p, &f.values);
        let (i0, j0) = (7, 5);
        let n0 = mesh.index(i0, j0);
        f.values[n0] += QTensor::new([0.1, -0.2, 0.05, 0.1, 0.0]);
        let g = gradient(&mesh, &p, &f.values);
        for n in 0..mesh.len() {
            let (i, j) = mesh.coords(n);
            let near = i.abs_diff(i0) + j.abs_diff(j0) <= 1;
            if !near {
                assert_eq!(g[n], base[n], "node ({i}, {j}) changed");
            }
        }
        assert!(g[n0].max_abs_diff(&base[n0]) > 0.0);
    }

    #[test]
    fn boundary_violations_are_reported() {
        let mut f = random_field(3);
        f.values[2].coords[0] += 1e-6;
        assert!(matches!(assemble_energy(&f), Err(Error::BoundaryViolation { i: 0, j: 2, .. })));
        let mut f = random_field(3);
        let n = f.mesh.index(4, 0);
        f.values[n].coords[1] = 1e-3;
        assert!(assemble_gradient(&f).is_err());
    }

    #[test]
    fn parts_sum_to_total() {
        let f = random_field(5);
        let e = assemble_energy(&f).unwrap();
        let sum = e.elastic_meridional + e.elastic_azimuthal + e.bulk + e.field;
        assert!((sum - e.total).abs() <= 1e-10 * e.total.abs());
        assert!(e.elastic_meridional >= 0.0 && e.elastic_azimuthal >= 0.0);
        assert!(e.bulk >= 0.0 && e.field >= 0.0);
    }
}
