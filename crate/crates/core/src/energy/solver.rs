use std::time::Instant;

use log::{debug, info};
use serde::{Deserialize, Serialize};

use super::assemble::{energy_parts, grad_norm, gradient, BOUNDARY_TOL};
use super::field::{axis_projection, Field2D};
use crate::error::{Error, Result};
use crate::potentials::G_NORM_FLOOR;
use crate::qtensor::QTensor;

/// While nodes are held at `Q = 0`, every this many iterations the solver
/// tries to release them.
const RELEASE_EVERY: usize = 1000;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverOpts {
    /// Stop once the mass-weighted gradient norm drops to this value.
    pub tol: f64,
    pub max_iter: usize,
    /// First trial step of the preconditioned flow.
    pub tau_init: f64,
    /// Backtracking gives up below this step.
    pub tau_min: f64,
    pub tau_max: f64,
    /// Record the energy every this many accepted steps.
    pub trace_every: usize,
}

impl Default for SolverOpts {
    fn default() -> Self {
        SolverOpts {
            tol: 1e-3,
            max_iter: 200_000,
            tau_init: 1e-5,
            tau_min: 1e-14,
            tau_max: 1.0,
            trace_every: 10,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolverStatus {
    Converged,
    MaxIterations,
    Stalled,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub status: SolverStatus,
    pub iterations: usize,
    pub rejected_steps: usize,
    pub initial_energy: f64,
    pub final_energy: f64,
    pub grad_norm: f64,
    /// Largest energy increase over an accepted step; zero by construction.
    pub max_increase: f64,
    pub energy_trace: Vec<f64>,
    /// Wall time; not serialized so that outputs stay reproducible.
    #[serde(skip)]
    pub seconds: f64,
    pub message: String,
}

impl ConvergenceReport {
    pub fn converged(&self) -> bool {
        self.status == SolverStatus::Converged
    }
}

#[inline]
fn held_grad_norm(mesh: &super::Mesh, g: &[QTensor], held: &[bool]) -> f64 {
    let masked: Vec<QTensor> = g.iter().zip(held).map(|(v, h)| if *h { QTensor::ZERO } else { *v }).collect();
    grad_norm(mesh, &masked)
}

fn constrain(q: QTensor, axis: bool, s_star: f64) -> QTensor {
    let q = if axis { axis_projection(&q) } else { q };
    q.retract_linf(s_star)
}

/// Mass-preconditioned gradient flow with Barzilai–Borwein steps and
/// monotone backtracking.
///
/// Each trial `Q − τ M⁻¹∇E` is projected onto the axis subspace and
/// retracted into `|Q| ≤ √(2/3) s*` before its energy is compared. Nodes at
/// `Q = 0` that block every step are held fixed, with periodic release
/// attempts, and drop out of the gradient norm while held. Returns
/// the final field with status `Converged` or `MaxIterations`; a step
/// underflow yields [`Error::SolverStall`] carrying the last accepted field.
pub fn minimize(field0: &Field2D, opts: &SolverOpts) -> Result<(Field2D, ConvergenceReport)> {
    field0.check_boundary(BOUNDARY_TOL)?;
    minimize_unchecked(field0, opts)
}

/// [`minimize`] keeping whatever values the Dirichlet rows hold.
pub fn minimize_unchecked(field0: &Field2D, opts: &SolverOpts) -> Result<(Field2D, ConvergenceReport)> {
    if !(opts.tol >= 0.0 && opts.tau_min > 0.0 && opts.tau_max >= opts.tau_init && opts.tau_init > 0.0) {
        return Err(Error::InvalidInput(format!("inconsistent solver options {opts:?}")));
    }
    let start = Instant::now();
    let mesh = field0.mesh.clone();
    let p = field0.params;
    let s = p.s_star;
    let free: Vec<bool> = (0..mesh.len()).map(|n| !mesh.is_dirichlet(n)).collect();
    let axis: Vec<bool> = (0..mesh.len()).map(|n| mesh.is_axis(n)).collect();

    let mut x: Vec<QTensor> = field0
        .values
        .iter()
        .enumerate()
        .map(|(n, q)| if free[n] { constrain(*q, axis[n], s) } else { *q })
        .collect();
    let total = |v: &[QTensor]| -> f64 { energy_parts(&mesh, &p, v).iter().sum() };
    let mut e = total(&x);
    let initial_energy = e;
    let mut g = gradient(&mesh, &p, &x);
    let mut gn = grad_norm(&mesh, &g);
    let mut tau = opts.tau_init;
    let mut trial = x.clone();
    let mut report = ConvergenceReport {
        status: SolverStatus::MaxIterations,
        iterations: 0,
        rejected_steps: 0,
        initial_energy,
        final_energy: e,
        grad_norm: gn,
        max_increase: 0.0,
        energy_trace: vec![e],
        seconds: 0.0,
        message: String::new(),
    };

    // g jumps at Q = 0, so a node sitting exactly on zero can block every
    // step; such nodes are held fixed after a failed line search.
    let floor = G_NORM_FLOOR * s;
    let mut held = vec![false; x.len()];
    let mut holding = false;
    let mut iter = 0;
    while iter < opts.max_iter {
        if gn <= opts.tol {
            report.status = SolverStatus::Converged;
            break;
        }
        let release = holding && iter % RELEASE_EVERY == 0;
        let mut hold = holding && !release;
        let tau0 = tau;
        let mut accepted = false;
        loop {
            while tau >= opts.tau_min {
                for n in 0..x.len() {
                    if free[n] && !(hold && held[n]) {
                        let step = g[n] * (-tau / mesh.mass[n]);
                        trial[n] = constrain(x[n] + step, axis[n], s);
                    } else {
                        trial[n] = x[n];
                    }
                }
                let et = total(&trial);
                if et <= e {
                    accepted = true;
                    report.max_increase = report.max_increase.max(et - e);
                    e = et;
                    break;
                }
                report.rejected_steps += 1;
                tau *= 0.5;
            }
            if accepted || hold {
                break;
            }
            let mut any = false;
            for n in 0..x.len() {
                held[n] = free[n] && x[n].norm() < floor;
                any |= held[n];
            }
            if !any {
                break;
            }
            debug!("holding zero nodes at iteration {iter}");
            hold = true;
            tau = if release { tau0 } else { opts.tau_init };
        }
        holding = hold;
        if !accepted {
            report.status = SolverStatus::Stalled;
            break;
        }
        let g_new = gradient(&mesh, &p, &trial);
        // Barzilai–Borwein step in the mass metric
        let (mut sms, mut sy) = (0.0, 0.0);
        for n in 0..x.len() {
            if free[n] {
                let dx = trial[n] - x[n];
                sms += mesh.mass[n] * dx.norm_sq();
                sy += dx.dot(&(g_new[n] - g[n]));
            }
        }
        tau = if sy > 0.0 { (sms / sy).clamp(opts.tau_min, opts.tau_max) } else { (2.0 * tau).min(opts.tau_max) };
        std::mem::swap(&mut x, &mut trial);
        g = g_new;
        gn = if holding { held_grad_norm(&mesh, &g, &held) } else { grad_norm(&mesh, &g) };
        iter += 1;
        if opts.trace_every > 0 && iter % opts.trace_every == 0 {
            report.energy_trace.push(e);
        }
        if iter % 5000 == 0 {
            debug!("iteration {iter}: energy {e:.10e}, grad norm {gn:.3e}, tau {tau:.3e}");
        }
    }
    if gn <= opts.tol {
        report.status = SolverStatus::Converged;
    }
    if report.energy_trace.last() != Some(&e) {
        report.energy_trace.push(e);
    }
    report.iterations = iter;
    report.final_energy = e;
    report.grad_norm = gn;
    report.seconds = start.elapsed().as_secs_f64();
    report.message = match report.status {
        SolverStatus::Converged => format!("converged after {iter} iterations"),
        SolverStatus::MaxIterations => format!(
            "reached {} iterations with grad norm {gn:.3e} > tol {:.3e}",
            opts.max_iter, opts.tol
        ),
        SolverStatus::Stalled => format!(
            "step fell below {:.1e} at iteration {iter} with grad norm {gn:.3e}",
            opts.tau_min
        ),
    };
    info!("{}: energy {:.8e}", report.message, e);
    let field = Field2D {
        mesh,
        params: p,
        values: x,
    };
    if report.status == SolverStatus::Stalled {
        return Err(Error::SolverStall(Box::new((field, report))));
    }
    Ok((field, report))
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::energy::assemble::assemble_energy;
    use crate::energy::mesh::{build_mesh, MeshSpec};
    use crate::potentials::ModelParams;

    fn mesh() -> Arc<crate::energy::Mesh> {
        Arc::new(
            build_mesh(MeshSpec {
                r_max: 3.0,
                n_r: 24,
                n_theta: 16,
                stretch: 1.05,
            })
            .unwrap(),
        )
    }

    #[test]
    fn preferred_state_needs_no_iterations() {
        let p = ModelParams::unit_material(0.5, 0.2).unwrap();
        let m = mesh();
        let q = super::super::field::far_field(p.s_star);
        let f = Field2D {
            values: vec![q; m.len()],
            mesh: m,
            params: p,
        };
        let (_, report) = minimize_unchecked(&f, &SolverOpts::default()).unwrap();
        assert_eq!(report.iterations, 0);
        assert!(report.converged());
        assert!(minimize(&f, &SolverOpts::default()).is_err());
    }

    #[test]
    fn descent_is_monotone_and_respects_bounds() {
        let p = ModelParams::unit_material(0.5, 0.2).unwrap();
        let f0 = Field2D::preferred(mesh(), p);
        let opts = SolverOpts {
            max_iter: 400,
            trace_every: 1,
            tol: 0.0,
            ..SolverOpts::default()
        };
        let (f, report) = minimize(&f0, &opts).unwrap();
        assert!(report.energy_trace.windows(2).all(|w| w[1] <= w[0]));
        assert_eq!(report.max_increase, 0.0);
        assert!(report.final_energy < report.initial_energy);
        let cap = (2.0f64 / 3.0).sqrt() * p.s_star + 1e-12;
        assert!(f.max_norm() <= cap);
        f.check_boundary(1e-12).unwrap();
        let e = assemble_energy(&f).unwrap();
        assert!((e.total - report.final_energy).abs() < 1e-9 * e.total);
    }

    #[test]
    fn converges_on_a_small_problem() {
        let p = ModelParams::unit_material(0.5, 0.3).unwrap();
        let f0 = Field2D::preferred(mesh(), p);
        let opts = SolverOpts {
            tol: 1e-6,
            ..SolverOpts::default()
        };
        let (_, report) = minimize(&f0, &opts).unwrap();
        assert!(report.converged(), "{}", report.message);
    }
}
