//! Analytic initial fields for a single interface at latitude `θ_d`.
//!
//! The sphere splits into `F` (director relaxing from the surface normal
//! towards `+e3` along the optimal radial profile) and `F^c` (relaxing
//! towards `−e3`). Near the interface the director phase is interpolated
//! across a wedge of half width `2η`, and a half-degree defect core sits in
//! the square `[1, 1+4η] × [θ_d − 2η, θ_d + 2η]` of the `(r, θ)` plane.

use std::f64::consts::PI;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::energy::{Field2D, Mesh};
use crate::error::{Error, Result};
use crate::potentials::ModelParams;
use crate::profile::{optimal_n3, ProfileSpec};
use crate::qtensor::QTensor;

/// Which side of the interface is `F`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    /// `F = {θ < θ_d}`.
    #[default]
    Up,
    /// `F = {θ > θ_d}`.
    Down,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeedSpec {
    pub theta_d: f64,
    pub eta: f64,
    /// Core regularization radius in units of the core disk radius.
    pub epsilon: f64,
    #[serde(default)]
    pub orientation: Orientation,
}

impl SeedSpec {
    pub fn new(theta_d: f64, eta: f64, epsilon: f64, orientation: Orientation) -> Result<Self> {
        let spec = SeedSpec {
            theta_d,
            eta,
            epsilon,
            orientation,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=PI).contains(&self.theta_d) {
            return Err(Error::InvalidSpec(format!("theta_d must lie in [0, π], got {}", self.theta_d)));
        }
        if !(self.eta > 0.0 && self.eta.is_finite()) {
            return Err(Error::InvalidSpec(format!("eta must be positive, got {}", self.eta)));
        }
        if !(self.epsilon > 0.0 && self.epsilon < 0.5) {
            return Err(Error::InvalidSpec(format!("epsilon must lie in (0, 0.5), got {}", self.epsilon)));
        }
        if !self.is_dipole() && 2.0 * self.eta >= self.theta_d.min(PI - self.theta_d) {
            return Err(Error::InvalidSpec(format!(
                "wedges of half width 2η = {} do not fit at θ_d = {}",
                2.0 * self.eta,
                self.theta_d
            )));
        }
        Ok(())
    }

    /// `θ_d ∈ {0, π}`: no interface, a single region covers the sphere.
    pub fn is_dipole(&self) -> bool {
        self.theta_d == 0.0 || self.theta_d == PI
    }

    /// Whether the point at latitude `theta` belongs to `F`.
    pub fn in_f(&self, theta: f64) -> bool {
        match self.orientation {
            Orientation::Up => theta < self.theta_d,
            Orientation::Down => theta > self.theta_d,
        }
    }
}

fn scaled(r: f64, eta: f64) -> f64 {
    ((r - 1.0) / eta).max(0.0)
}

fn profile_n3(t: f64, theta: f64, s_star: f64) -> f64 {
    let spec = ProfileSpec {
        theta: theta.clamp(0.0, PI),
        s_star,
        sign: 1,
        t_max: 1.0,
        n_points: 2,
    };
    optimal_n3(t, &spec)
}

/// Director phase `φ` (director `(sin φ, 0, cos φ)`) of the `F` region.
fn phase_f(r: f64, theta: f64, eta: f64, s_star: f64) -> f64 {
    profile_n3(scaled(r, eta), theta, s_star).clamp(-1.0, 1.0).acos()
}

/// Director phase of the `F^c` region.
fn phase_fc(r: f64, theta: f64, eta: f64, s_star: f64) -> f64 {
    -profile_n3(scaled(r, eta), PI - theta, s_star).clamp(-1.0, 1.0).acos()
}

fn region_phase(spec: &SeedSpec, r: f64, theta: f64, s_star: f64) -> f64 {
    if spec.in_f(theta) || (spec.is_dipole() && spec.in_f_dipole()) {
        phase_f(r, theta, spec.eta, s_star)
    } else {
        phase_fc(r, theta, spec.eta, s_star)
    }
}

impl SeedSpec {
    /// For `θ_d ∈ {0, π}`: whether the single region is `F`.
    fn in_f_dipole(&self) -> bool {
        matches!(
            (self.theta_d == PI, self.orientation),
            (true, Orientation::Up) | (false, Orientation::Down)
        )
    }
}

fn out_of_region(what: &str, r: f64, theta: f64) -> Error {
    Error::InvalidInput(format!("({r}, {theta}) lies outside the {what}"))
}

/// Field on `F`: `s*(n⊗n − Id/3)`, `n = (√(1 − n3²), 0, n3)` with
/// `n3 = n3((r − 1)/η, θ)` from the optimal radial profile.
pub fn seed_region_f(r: f64, theta: f64, spec: &SeedSpec, s_star: f64) -> Result<QTensor> {
    let inside = if spec.is_dipole() {
        spec.in_f_dipole()
    } else {
        match spec.orientation {
            Orientation::Up => theta <= spec.theta_d - 2.0 * spec.eta + 1e-12,
            Orientation::Down => theta >= spec.theta_d + 2.0 * spec.eta - 1e-12,
        }
    };
    if !inside || r < 1.0 {
        return Err(out_of_region("F region", r, theta));
    }
    let n3 = profile_n3(scaled(r, spec.eta), theta, s_star);
    Ok(uniaxial_from_n3(n3, 1.0, s_star))
}

/// Field on `F^c`: `n = (−√(1 − n3²), 0, n3)` with `n3 = n3((r − 1)/η, π − θ)`.
pub fn seed_region_fc(r: f64, theta: f64, spec: &SeedSpec, s_star: f64) -> Result<QTensor> {
    let inside = if spec.is_dipole() {
        !spec.in_f_dipole()
    } else {
        match spec.orientation {
            Orientation::Up => theta >= spec.theta_d + 2.0 * spec.eta - 1e-12,
            Orientation::Down => theta <= spec.theta_d - 2.0 * spec.eta + 1e-12,
        }
    };
    if !inside || r < 1.0 {
        return Err(out_of_region("F^c region", r, theta));
    }
    let n3 = profile_n3(scaled(r, spec.eta), PI - theta, s_star);
    Ok(uniaxial_from_n3(n3, -1.0, s_star))
}

fn uniaxial_from_n3(n3: f64, x_sign: f64, s_star: f64) -> QTensor {
    let n3 = n3.clamp(-1.0, 1.0);
    let n1 = x_sign * (1.0 - n3 * n3).max(0.0).sqrt();
    QTensor::uniaxial_unchecked(&nalgebra::Vector3::new(n1, 0.0, n3), s_star)
}

/// Wedge phase for `|θ − θ_d| ≤ 2η`: linear in `θ` from the adjacent region
/// phase at `θ_d ∓ 2η` down to `0` at `θ_d`.
fn wedge_phase(r: f64, theta: f64, spec: &SeedSpec, s_star: f64) -> f64 {
    let (td, eta) = (spec.theta_d, spec.eta);
    let weight = (theta - td).abs() / (2.0 * eta);
    let edge = if theta <= td { td - 2.0 * eta } else { td + 2.0 * eta };
    weight * region_phase(spec, r, edge, s_star)
}

/// Wedge field between the regions, outside the core square.
pub fn seed_wedge(r: f64, theta: f64, spec: &SeedSpec, s_star: f64) -> Result<QTensor> {
    if spec.is_dipole() || (theta - spec.theta_d).abs() > 2.0 * spec.eta + 1e-12 || r < 1.0 + 4.0 * spec.eta {
        return Err(out_of_region("interpolation wedge", r, theta));
    }
    Ok(QTensor::meridional(wedge_phase(r, theta, spec, s_star), s_star))
}

/// Radial ramp of the core: `0` below `ε`, linear on `[ε, 2ε)`, `1` beyond.
pub fn core_ramp(local_r: f64, epsilon: f64) -> f64 {
    if local_r < epsilon {
        0.0
    } else if local_r < 2.0 * epsilon {
        local_r / epsilon - 1.0
    } else {
        1.0
    }
}

/// The half-degree core map on the unit disk:
/// `ramp(local_r) · s*(n(α)⊗n(α) − Id/3)`, `n(α) = (sin(α/2), 0, cos(α/2))`.
pub fn seed_core(local_r: f64, alpha: f64, epsilon: f64, s_star: f64) -> QTensor {
    QTensor::meridional(0.5 * alpha, s_star) * core_ramp(local_r, epsilon)
}

/// Geometry of the core square around a (possibly snapped) centre.
#[derive(Clone, Debug)]
pub struct CoreGeometry {
    /// Centre `(r_c, θ_c)`.
    pub center: (f64, f64),
    /// Square `[r_lo, r_hi] × [θ_lo, θ_hi]`.
    pub r_lo: f64,
    pub r_hi: f64,
    pub theta_lo: f64,
    pub theta_hi: f64,
    pub disk_radius: f64,
    /// Unwrapped boundary phase samples over `α ∈ [0, 2π]`.
    boundary: Vec<f64>,
    /// Total change of the boundary phase around the square (`±π`).
    pub winding: f64,
}

const BOUNDARY_SAMPLES: usize = 4096;

impl CoreGeometry {
    fn new(spec: &SeedSpec, center: (f64, f64), s_star: f64) -> Result<Self> {
        let eta = spec.eta;
        let mut geo = CoreGeometry {
            center,
            r_lo: 1.0,
            r_hi: 1.0 + 4.0 * eta,
            theta_lo: spec.theta_d - 2.0 * eta,
            theta_hi: spec.theta_d + 2.0 * eta,
            disk_radius: eta,
            boundary: Vec::new(),
            winding: 0.0,
        };
        let (rc, tc) = center;
        let clearance = (rc - geo.r_lo)
            .min(geo.r_hi - rc)
            .min(tc - geo.theta_lo)
            .min(geo.theta_hi - tc);
        if clearance <= eta {
            return Err(Error::InvalidSpec(format!(
                "core disk of radius {eta} does not fit around ({rc}, {tc})"
            )));
        }
        let mut samples = Vec::with_capacity(BOUNDARY_SAMPLES + 1);
        for k in 0..=BOUNDARY_SAMPLES {
            let alpha = 2.0 * PI * k as f64 / BOUNDARY_SAMPLES as f64;
            let raw = geo.raw_boundary_phase(alpha, spec, s_star);
            let v = match samples.last() {
                None => raw,
                Some(&prev) => nearest_branch(raw, prev),
            };
            samples.push(v);
        }
        geo.winding = samples[BOUNDARY_SAMPLES] - samples[0];
        if (geo.winding.abs() - PI).abs() > 1e-6 {
            return Err(Error::InvalidSpec(format!(
                "boundary phase winds by {} instead of ±π",
                geo.winding
            )));
        }
        geo.boundary = samples;
        Ok(geo)
    }

    /// Local polar coordinates `(r̄, α)` with `α = 0` pointing to larger `r`
    /// and `α = π/2` to larger `θ`.
    pub fn local(&self, r: f64, theta: f64) -> (f64, f64) {
        let (dr, dt) = (r - self.center.0, theta - self.center.1);
        let alpha = dt.atan2(dr).rem_euclid(2.0 * PI);
        (dr.hypot(dt), alpha)
    }

    /// Distance from the centre to the square along direction `α`.
    pub fn ray_length(&self, alpha: f64) -> f64 {
        let (sa, ca) = alpha.sin_cos();
        let (rc, tc) = self.center;
        let mut best = f64::INFINITY;
        if ca > 1e-300 {
            best = best.min((self.r_hi - rc) / ca);
        } else if ca < -1e-300 {
            best = best.min((self.r_lo - rc) / ca);
        }
        if sa > 1e-300 {
            best = best.min((self.theta_hi - tc) / sa);
        } else if sa < -1e-300 {
            best = best.min((self.theta_lo - tc) / sa);
        }
        best
    }

    pub fn contains(&self, r: f64, theta: f64) -> bool {
        r >= self.r_lo && r <= self.r_hi && theta >= self.theta_lo && theta <= self.theta_hi
    }

    fn raw_boundary_phase(&self, alpha: f64, spec: &SeedSpec, s_star: f64) -> f64 {
        let len = self.ray_length(alpha);
        let r = self.center.0 + len * alpha.cos();
        let theta = self.center.1 + len * alpha.sin();
        self.square_edge_phase(r, theta, spec, s_star)
    }

    fn square_edge_phase(&self, r: f64, theta: f64, spec: &SeedSpec, s_star: f64) -> f64 {
        let tol = 1e-12;
        if r <= self.r_lo + tol {
            theta
        } else if r >= self.r_hi - tol {
            wedge_phase(self.r_hi, theta.clamp(self.theta_lo, self.theta_hi), spec, s_star)
        } else {
            region_phase(spec, r, theta, s_star)
        }
    }

    /// Unwrapped boundary phase at `α` on the branch continuous from `α = 0`.
    fn boundary_phase(&self, alpha: f64, spec: &SeedSpec, s_star: f64) -> f64 {
        let x = alpha / (2.0 * PI) * BOUNDARY_SAMPLES as f64;
        let k = (x.floor() as usize).min(BOUNDARY_SAMPLES - 1);
        let frac = x - k as f64;
        let guess = self.boundary[k] * (1.0 - frac) + self.boundary[k + 1] * frac;
        nearest_branch(self.raw_boundary_phase(alpha, spec, s_star), guess)
    }

    /// Phase of the half-degree core at direction `α`.
    fn core_phase(&self, alpha: f64) -> f64 {
        self.boundary[0] + self.winding.signum() * 0.5 * alpha
    }

    /// Field inside the square.
    pub fn sample(&self, r: f64, theta: f64, spec: &SeedSpec, s_star: f64) -> QTensor {
        let (rbar, alpha) = self.local(r, theta);
        let core = self.core_phase(alpha);
        if rbar < self.disk_radius {
            let ramp = core_ramp(rbar / self.disk_radius, spec.epsilon);
            return QTensor::meridional(core, s_star) * ramp;
        }
        let big = self.ray_length(alpha);
        let outer = self.boundary_phase(alpha, spec, s_star);
        let w = ((rbar - self.disk_radius) / (big - self.disk_radius)).clamp(0.0, 1.0);
        QTensor::meridional((1.0 - w) * core + w * outer, s_star)
    }
}

/// `raw + kπ` closest to `reference`.
fn nearest_branch(raw: f64, reference: f64) -> f64 {
    raw + ((reference - raw) / PI).round() * PI
}

/// Snaps the nominal core centre `(1 + 2η, θ_d)` to the nearest mesh node.
pub fn snapped_center(mesh: &Mesh, spec: &SeedSpec) -> (f64, f64) {
    let i = mesh.nearest_r(1.0 + 2.0 * spec.eta);
    let j = mesh.nearest_theta(spec.theta_d);
    (mesh.r[i], mesh.theta[j])
}

/// Core geometry used by [`build_seed`] on this mesh.
pub fn core_geometry(mesh: &Mesh, spec: &SeedSpec, s_star: f64) -> Result<Option<CoreGeometry>> {
    spec.validate()?;
    if spec.is_dipole() {
        return Ok(None);
    }
    CoreGeometry::new(spec, snapped_center(mesh, spec), s_star).map(Some)
}

/// Value of the construction at `(r, θ)` given the core geometry.
pub fn seed_value(r: f64, theta: f64, spec: &SeedSpec, core: Option<&CoreGeometry>, s_star: f64) -> QTensor {
    if let Some(core) = core {
        if core.contains(r, theta) {
            return core.sample(r, theta, spec, s_star);
        }
        if (theta - spec.theta_d).abs() <= 2.0 * spec.eta {
            return QTensor::meridional(wedge_phase(r, theta, spec, s_star), s_star);
        }
    }
    let in_f = if spec.is_dipole() { spec.in_f_dipole() } else { spec.in_f(theta) };
    if in_f {
        uniaxial_from_n3(profile_n3(scaled(r, spec.eta), theta, s_star), 1.0, s_star)
    } else {
        uniaxial_from_n3(profile_n3(scaled(r, spec.eta), PI - theta, s_star), -1.0, s_star)
    }
}

/// Samples the construction at every node and imposes the boundary data.
pub fn build_seed(mesh: Arc<Mesh>, spec: &SeedSpec, params: ModelParams) -> Result<Field2D> {
    spec.validate()?;
    if !spec.is_dipole() && mesh.spec.r_max <= 1.0 + 4.0 * spec.eta {
        return Err(Error::InvalidSpec(format!(
            "r_max = {} does not contain the core square up to r = {}",
            mesh.spec.r_max,
            1.0 + 4.0 * spec.eta
        )));
    }
    if mesh.spec.r_max <= 1.0 + 4.0 * spec.eta {
        log::warn!("r_max = {} is within 4η of the colloid", mesh.spec.r_max);
    }
    let s = params.s_star;
    let core = core_geometry(&mesh, spec, s)?;
    if let Some(core) = &core {
        let dt = mesh.dtheta();
        if (core.center.1 - spec.theta_d).abs() > dt {
            return Err(Error::InvalidSpec("mesh too coarse to place the core".into()));
        }
    }
    Ok(Field2D::from_fn(mesh, params, |r, theta| seed_value(r, theta, spec, core.as_ref(), s)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::energy::{build_mesh, MeshSpec};
    use nalgebra::Vector3;

    const S: f64 = 1.5;

    fn spec(theta_d: f64) -> SeedSpec {
        SeedSpec::new(theta_d, 0.15, 0.01, Orientation::Up).unwrap()
    }

    #[test]
    fn region_f_examples() {
        let sp = spec(PI / 2.0);
        let q = seed_region_f(1.0, 0.4, &sp, S).unwrap();
        let expect = QTensor::from_director(&Vector3::new(0.4f64.sin(), 0.0, 0.4f64.cos()), S).unwrap();
        assert!(q.max_abs_diff(&expect) < 1e-14);
        let far = seed_region_f(1.0 + 40.0 * sp.eta, 0.4, &sp, S).unwrap();
        assert!(far.max_abs_diff(&QTensor::from_director(&Vector3::z(), S).unwrap()) < 1e-10);
        assert!(seed_region_f(1.0, 1.5, &sp, S).is_err());
        let ps = ProfileSpec::new(0.4, S, 1).unwrap();
        let q = seed_region_f(1.3, 0.4, &sp, S).unwrap();
        let n3 = q.spectral().n[2].abs();
        assert!((n3 - optimal_n3(2.0, &ps)).abs() < 1e-10);
    }

    #[test]
    fn region_fc_examples() {
        let sp = spec(PI / 2.0);
        let q = seed_region_fc(1.0, 3.0, &sp, S).unwrap();
        assert!(q.max_abs_diff(&QTensor::meridional(3.0, S)) < 1e-14);
        let far = seed_region_fc(1.0 + 40.0 * sp.eta, 3.0, &sp, S).unwrap();
        assert!(far.max_abs_diff(&QTensor::from_director(&Vector3::z(), S).unwrap()) < 1e-10);
        assert!(seed_region_fc(1.2, 1.0, &sp, S).is_err());
    }

    #[test]
    fn wedge_examples() {
        let sp = spec(PI / 2.0);
        let r = 1.0 + 5.0 * sp.eta;
        let e3 = QTensor::from_director(&Vector3::z(), S).unwrap();
        assert!(seed_wedge(r, PI / 2.0, &sp, S).unwrap().max_abs_diff(&e3) < 1e-15);
        let lo = PI / 2.0 - 2.0 * sp.eta;
        let hi = PI / 2.0 + 2.0 * sp.eta;
        let a = seed_wedge(r, lo, &sp, S).unwrap();
        assert!(a.max_abs_diff(&seed_region_f(r, lo, &sp, S).unwrap()) < 1e-12);
        let b = seed_wedge(r, hi, &sp, S).unwrap();
        assert!(b.max_abs_diff(&seed_region_fc(r, hi, &sp, S).unwrap()) < 1e-12);
        assert!(seed_wedge(1.1, PI / 2.0, &sp, S).is_err());
    }

    #[test]
    fn core_examples() {
        let eps = 0.01;
        assert_eq!(seed_core(0.5 * eps, 1.0, eps, S), QTensor::ZERO);
        let e3 = QTensor::from_director(&Vector3::z(), S).unwrap();
        assert!(seed_core(1.0, 0.0, eps, S).max_abs_diff(&e3) < 1e-15);
        let almost = seed_core(1.0, 2.0 * PI - 1e-12, eps, S);
        assert!(almost.max_abs_diff(&e3) < 1e-11);
        let mid = seed_core(1.5 * eps, 0.3, eps, S);
        assert!((mid.norm() - 0.5 * e3.norm()).abs() < 1e-12);
    }

    #[test]
    fn invalid_specs() {
        assert!(SeedSpec::new(0.2, 0.15, 0.01, Orientation::Up).is_err());
        assert!(SeedSpec::new(PI / 2.0, 0.15, 0.7, Orientation::Up).is_err());
        assert!(SeedSpec::new(0.0, 0.15, 0.01, Orientation::Up).is_ok());
    }

    fn mesh(n_r: usize, n_theta: usize) -> Arc<Mesh> {
        Arc::new(
            build_mesh(MeshSpec {
                r_max: 8.0,
                n_r,
                n_theta,
                stretch: 1.015,
            })
            .unwrap(),
        )
    }

    #[test]
    fn dipole_seed_is_pure_region() {
        let p = ModelParams::unit_material(0.5, 0.15).unwrap();
        let m = mesh(64, 48);
        let sp = spec(0.0);
        let f = build_seed(m.clone(), &sp, p).unwrap();
        for n in 0..m.len() {
            let (i, j) = m.coords(n);
            if i == 0 || i + 1 == m.n_r() || j == 0 || j + 1 == m.n_theta() {
                continue;
            }
            let q = seed_region_fc(m.r[i], m.theta[j], &sp, p.s_star).unwrap();
            assert!(f.values[n].max_abs_diff(&q) < 1e-15);
        }
    }

    #[test]
    fn saturn_seed_has_a_core_and_is_uniaxial_elsewhere() {
        let p = ModelParams::unit_material(0.5, 0.15).unwrap();
        let m = mesh(128, 96);
        let sp = spec(PI / 2.0);
        let f = build_seed(m.clone(), &sp, p).unwrap();
        f.check_boundary(1e-12).unwrap();
        let core = core_geometry(&m, &sp, p.s_star).unwrap().unwrap();
        assert!((core.winding.abs() - PI).abs() < 1e-9);
        let phi = f.biaxiality();
        let mut min_in_b = f64::INFINITY;
        for n in 0..m.len() {
            let (i, j) = m.coords(n);
            let (rbar, _) = core.local(m.r[i], m.theta[j]);
            if rbar < core.disk_radius {
                min_in_b = min_in_b.min(phi[n]);
            } else if rbar >= 2.0 * sp.epsilon * core.disk_radius {
                assert!((phi[n] - 1.0).abs() < 1e-12 || m.is_axis(n), "φ = {} at ({i}, {j})", phi[n]);
            }
        }
        assert!(min_in_b < 0.1);
    }
}
