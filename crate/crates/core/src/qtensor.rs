//! Traceless symmetric 3x3 tensors (Q-tensors) stored in a fixed orthonormal
//! basis of `Sym0`.
//!
//! The basis is
//!
//! ```text
//! E1 = (e1⊗e2 + e2⊗e1)/√2     E2 = (e1⊗e3 + e3⊗e1)/√2     E3 = (e2⊗e3 + e3⊗e2)/√2
//! E4 = (e1⊗e1 − e2⊗e2)/√2     E5 = (2e3⊗e3 − e1⊗e1 − e2⊗e2)/√6
//! ```
//!
//! so the Frobenius inner product of two tensors is the Euclidean inner
//! product of their coordinates, and tracelessness holds by construction.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const INV_SQRT6: f64 = 0.408_248_290_463_863_f64;
const SQRT_2_3: f64 = 0.816_496_580_927_726_f64;

/// Relative tolerance deciding when `λ1 ≈ λ2` (the biaxial cone).
pub const TIE_TOL: f64 = 1e-9;

/// A traceless symmetric 3x3 tensor.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct QTensor {
    pub coords: [f64; 5],
}

/// Eigen-decomposition `Q = s((n⊗n − I/3) + r(m⊗m − I/3))`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectralData {
    /// Eigenvalues sorted descending.
    pub lambda: [f64; 3],
    pub n: Vector3<f64>,
    pub m: Vector3<f64>,
    pub s: f64,
    pub r: f64,
}

impl QTensor {
    pub const ZERO: QTensor = QTensor { coords: [0.0; 5] };

    pub fn new(coords: [f64; 5]) -> Self {
        QTensor { coords }
    }

    /// `s (n⊗n − I/3)`. Errors unless `|n| = 1` within `1e-12`.
    pub fn from_director(n: &Vector3<f64>, s: f64) -> Result<Self> {
        if (n.norm() - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidInput(format!(
                "director must be a unit vector, got |n| = {}",
                n.norm()
            )));
        }
        Ok(Self::uniaxial_unchecked(n, s))
    }

    /// `s (n⊗n − I/3)` without the unit-norm check.
    #[inline]
    pub fn uniaxial_unchecked(n: &Vector3<f64>, s: f64) -> Self {
        let (x, y, z) = (n[0], n[1], n[2]);
        QTensor {
            coords: [
                s * 2f64.sqrt() * x * y,
                s * 2f64.sqrt() * x * z,
                s * 2f64.sqrt() * y * z,
                s * (x * x - y * y) * FRAC_1_SQRT_2,
                s * (2.0 * z * z - x * x - y * y) * INV_SQRT6,
            ],
        }
    }

    /// Uniaxial tensor with director `(sin φ, 0, cos φ)` in the meridional plane.
    #[inline]
    pub fn meridional(phase: f64, s: f64) -> Self {
        let (sp, cp) = phase.sin_cos();
        Self::uniaxial_unchecked(&Vector3::new(sp, 0.0, cp), s)
    }

    /// Projects an arbitrary 3x3 matrix onto `Sym0` (symmetric part, trace removed).
    pub fn from_matrix(a: &Matrix3<f64>) -> Self {
        let q12 = 0.5 * (a[(0, 1)] + a[(1, 0)]);
        let q13 = 0.5 * (a[(0, 2)] + a[(2, 0)]);
        let q23 = 0.5 * (a[(1, 2)] + a[(2, 1)]);
        QTensor {
            coords: [
                2f64.sqrt() * q12,
                2f64.sqrt() * q13,
                2f64.sqrt() * q23,
                (a[(0, 0)] - a[(1, 1)]) * FRAC_1_SQRT_2,
                (2.0 * a[(2, 2)] - a[(0, 0)] - a[(1, 1)]) * INV_SQRT6,
            ],
        }
    }

    pub fn to_matrix(&self) -> Matrix3<f64> {
        let [q1, q2, q3, q4, q5] = self.coords;
        let h = FRAC_1_SQRT_2;
        let q11 = q4 * h - q5 * INV_SQRT6;
        let q22 = -q4 * h - q5 * INV_SQRT6;
        let q33 = 2.0 * q5 * INV_SQRT6;
        Matrix3::new(
            q11,
            q1 * h,
            q2 * h,
            q1 * h,
            q22,
            q3 * h,
            q2 * h,
            q3 * h,
            q33,
        )
    }

    /// Matrix entry `Q_ij` (0-based).
    #[inline]
    pub fn entry(&self, i: usize, j: usize) -> f64 {
        let [q1, q2, q3, q4, q5] = self.coords;
        let h = FRAC_1_SQRT_2;
        match (i.min(j), i.max(j)) {
            (0, 0) => q4 * h - q5 * INV_SQRT6,
            (1, 1) => -q4 * h - q5 * INV_SQRT6,
            (2, 2) => 2.0 * q5 * INV_SQRT6,
            (0, 1) => q1 * h,
            (0, 2) => q2 * h,
            (1, 2) => q3 * h,
            _ => unreachable!("index out of range"),
        }
    }

    #[inline]
    pub fn dot(&self, other: &QTensor) -> f64 {
        self.coords
            .iter()
            .zip(other.coords.iter())
            .map(|(a, b)| a * b)
            .sum()
    }

    /// `tr(Q²) = |Q|²`.
    #[inline]
    pub fn norm_sq(&self) -> f64 {
        self.dot(self)
    }

    /// Frobenius norm.
    #[inline]
    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// `tr(Q³) = 3 det Q` for traceless `Q`.
    #[inline]
    pub fn trace_cube(&self) -> f64 {
        3.0 * self.to_matrix().determinant()
    }

    /// Eigen-decomposition with deterministic tie-breaking.
    pub fn spectral(&self) -> SpectralData {
        spectral(self)
    }

    /// `Q ↦ R_φᵀ Q R_φ`, conjugation by the rotation about `e3`.
    pub fn rotate(&self, phi: f64) -> QTensor {
        let (s, c) = phi.sin_cos();
        let rot = Matrix3::new(c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0);
        QTensor::from_matrix(&(rot.transpose() * self.to_matrix() * rot))
    }

    /// `|∂_φ Q|² = |Q|² + 6 (Q12² − Q11 Q22)` for the equivariant extension.
    pub fn azimuthal_grad_sq(&self) -> f64 {
        let q11 = self.entry(0, 0);
        let q22 = self.entry(1, 1);
        let q12 = self.entry(0, 1);
        self.norm_sq() + 6.0 * (q12 * q12 - q11 * q22)
    }

    /// Gradient of [`QTensor::azimuthal_grad_sq`]; in coordinates the form is
    /// `4q1² + q2² + q3² + 4q4²`.
    #[inline]
    pub fn azimuthal_grad_sq_gradient(&self) -> QTensor {
        let [q1, q2, q3, q4, _] = self.coords;
        QTensor::new([8.0 * q1, 2.0 * q2, 2.0 * q3, 8.0 * q4, 0.0])
    }

    /// Projection onto the vacuum manifold `N`: `s*(n⊗n − I/3)` for the
    /// dominant eigenvector `n`. Errors on the biaxial cone `λ1 = λ2`.
    pub fn project_n(&self, s_star: f64) -> Result<QTensor> {
        let sp = self.spectral();
        if on_cone(&sp.lambda, self.norm()) {
            return Err(Error::DegenerateTensor(format!(
                "λ1 − λ2 = {:e} is within tolerance; no dominant director",
                sp.lambda[0] - sp.lambda[1]
            )));
        }
        Ok(QTensor::uniaxial_unchecked(&sp.n, s_star))
    }

    /// `|Q − project_n(Q)|`.
    pub fn dist_n(&self, s_star: f64) -> Result<f64> {
        Ok((*self - self.project_n(s_star)?).norm())
    }

    /// Biaxiality `φ = s(1 − r)/s* = (λ1 − λ2)/s*`; 1 on `N`, 0 on the cone.
    pub fn biaxiality_phi(&self, s_star: f64) -> f64 {
        if self.norm_sq() == 0.0 {
            return 0.0;
        }
        let lambda = spectral(self).lambda;
        ((lambda[0] - lambda[1]) / s_star).max(0.0)
    }

    /// Radial retraction onto the ball `|Q| ≤ √(2/3) s*`.
    #[inline]
    pub fn retract_linf(&self, s_star: f64) -> QTensor {
        let cap = SQRT_2_3 * s_star;
        let norm = self.norm();
        if norm > cap {
            *self * (cap / norm)
        } else {
            *self
        }
    }

    pub fn max_abs_diff(&self, other: &QTensor) -> f64 {
        self.coords
            .iter()
            .zip(other.coords.iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

impl Add for QTensor {
    type Output = QTensor;
    #[inline]
    fn add(mut self, rhs: QTensor) -> QTensor {
        self += rhs;
        self
    }
}

impl AddAssign for QTensor {
    #[inline]
    fn add_assign(&mut self, rhs: QTensor) {
        for (a, b) in self.coords.iter_mut().zip(rhs.coords) {
            *a += b;
        }
    }
}

impl Sub for QTensor {
    type Output = QTensor;
    #[inline]
    fn sub(mut self, rhs: QTensor) -> QTensor {
        self -= rhs;
        self
    }
}

impl SubAssign for QTensor {
    #[inline]
    fn sub_assign(&mut self, rhs: QTensor) {
        for (a, b) in self.coords.iter_mut().zip(rhs.coords) {
            *a -= b;
        }
    }
}

impl Mul<f64> for QTensor {
    type Output = QTensor;
    #[inline]
    fn mul(mut self, rhs: f64) -> QTensor {
        for a in self.coords.iter_mut() {
            *a *= rhs;
        }
        self
    }
}

impl Mul<QTensor> for f64 {
    type Output = QTensor;
    #[inline]
    fn mul(self, rhs: QTensor) -> QTensor {
        rhs * self
    }
}

impl Neg for QTensor {
    type Output = QTensor;
    #[inline]
    fn neg(self) -> QTensor {
        self * -1.0
    }
}

impl SpectralData {
    /// `s((n⊗n − I/3) + r(m⊗m − I/3))` as a matrix.
    pub fn reconstruct(&self) -> Matrix3<f64> {
        let id = Matrix3::identity() / 3.0;
        self.s * ((self.n * self.n.transpose() - id) + self.r * (self.m * self.m.transpose() - id))
    }
}

fn on_cone(lambda: &[f64; 3], norm: f64) -> bool {
    lambda[0] - lambda[1] <= TIE_TOL * norm.max(1.0)
}

/// Closed-form eigenvalues of a traceless symmetric matrix, sorted descending.
fn eigenvalues(q: &QTensor) -> [f64; 3] {
    let p2 = q.norm_sq();
    if p2 == 0.0 {
        return [0.0; 3];
    }
    // traceless: A = p B with p = sqrt(tr(A²)/6), eigenvalues 2p cos(φ + 2πk/3)
    let p = (p2 / 6.0).sqrt();
    let half_det = (q.to_matrix() / p).determinant() / 2.0;
    let phi = half_det.clamp(-1.0, 1.0).acos() / 3.0;
    let l1 = 2.0 * p * phi.cos();
    let l3 = 2.0 * p * (phi + 2.0 * PI / 3.0).cos();
    let l2 = -l1 - l3;
    [l1, l2, l3]
}

/// Unit eigenvector for an isolated eigenvalue via cross products of the rows
/// of `A − λI`.
fn isolated_eigenvector(a: &Matrix3<f64>, lambda: f64) -> Vector3<f64> {
    let b = a - Matrix3::identity() * lambda;
    let r0: Vector3<f64> = b.row(0).transpose();
    let r1: Vector3<f64> = b.row(1).transpose();
    let r2: Vector3<f64> = b.row(2).transpose();
    let candidates = [r0.cross(&r1), r0.cross(&r2), r1.cross(&r2)];
    let best = candidates
        .iter()
        .max_by(|x, y| x.norm_squared().total_cmp(&y.norm_squared()))
        .copied()
        .unwrap_or_else(Vector3::x);
    let norm = best.norm();
    if norm > 0.0 {
        best / norm
    } else {
        Vector3::x()
    }
}

/// First reference axis (e1, e2, e3 priority) with a substantial component
/// orthogonal to `v`, Gram–Schmidt orthonormalised against `v`.
fn reference_orthogonal(v: &Vector3<f64>) -> Vector3<f64> {
    for axis in [Vector3::x(), Vector3::y(), Vector3::z()] {
        let w = axis - v * v.dot(&axis);
        let norm = w.norm();
        if norm > 0.5 {
            return w / norm;
        }
    }
    unreachable!("one axis always has an orthogonal component ≥ √(2/3)")
}

fn orthonormalize(v: &Vector3<f64>, against: &Vector3<f64>) -> Vector3<f64> {
    let w = v - against * against.dot(v);
    let norm = w.norm();
    if norm > 1e-8 {
        w / norm
    } else {
        reference_orthogonal(against)
    }
}

fn canonical_sign(v: Vector3<f64>) -> Vector3<f64> {
    let idx = v.iamax();
    if v[idx] < 0.0 {
        -v
    } else {
        v
    }
}

fn spectral(q: &QTensor) -> SpectralData {
    let norm = q.norm();
    let lambda0 = eigenvalues(q);
    if norm == 0.0 {
        return SpectralData {
            lambda: [0.0; 3],
            n: Vector3::x(),
            m: Vector3::y(),
            s: 0.0,
            r: 0.0,
        };
    }
    let a = q.to_matrix();
    let tol = TIE_TOL * norm.max(1.0);
    let tie12 = lambda0[0] - lambda0[1] <= tol;
    let tie23 = lambda0[1] - lambda0[2] <= tol;

    let (v1, v2) = match (tie12, tie23) {
        (false, false) => {
            let v1 = isolated_eigenvector(&a, lambda0[0]);
            let v3 = orthonormalize(&isolated_eigenvector(&a, lambda0[2]), &v1);
            (v1, v3.cross(&v1))
        }
        (true, false) => {
            let v3 = isolated_eigenvector(&a, lambda0[2]);
            let v1 = reference_orthogonal(&v3);
            (v1, v3.cross(&v1))
        }
        (false, true) => {
            let v1 = isolated_eigenvector(&a, lambda0[0]);
            (v1, reference_orthogonal(&v1))
        }
        (true, true) => (Vector3::x(), Vector3::y()),
    };
    let v3 = v1.cross(&v2);
    let mut vecs = [v1, v2, v3];

    // One Jacobi sweep on VᵀAV; pairs inside a tie are left alone so the
    // reference-frame choice above survives.
    let mut b = {
        let v = Matrix3::from_columns(&vecs);
        v.transpose() * a * v
    };
    for (p, r) in [(0usize, 1usize), (0, 2), (1, 2)] {
        let off = b[(p, r)];
        if off == 0.0 || (b[(p, p)] - b[(r, r)]).abs() <= tol {
            continue;
        }
        let theta = 0.5 * (2.0 * off).atan2(b[(p, p)] - b[(r, r)]);
        let (sn, cs) = theta.sin_cos();
        let mut g = Matrix3::identity();
        g[(p, p)] = cs;
        g[(r, r)] = cs;
        g[(p, r)] = -sn;
        g[(r, p)] = sn;
        b = g.transpose() * b * g;
        let (vp, vr) = (vecs[p], vecs[r]);
        vecs[p] = vp * cs + vr * sn;
        vecs[r] = -vp * sn + vr * cs;
    }
    // order descending, but never swap values that agree within the tie tolerance
    let mut pairs: Vec<(f64, Vector3<f64>)> = (0..3).map(|k| (b[(k, k)], vecs[k])).collect();
    for _ in 0..2 {
        for k in 0..2 {
            if pairs[k + 1].0 > pairs[k].0 + tol {
                pairs.swap(k, k + 1);
            }
        }
    }
    let mean = (pairs[0].0 + pairs[1].0 + pairs[2].0) / 3.0;
    let mut lambda = [pairs[0].0 - mean, pairs[1].0 - mean, pairs[2].0 - mean];
    lambda[1] = lambda[1].min(lambda[0]);
    lambda[2] = lambda[2].min(lambda[1]);

    let n = canonical_sign(pairs[0].1.normalize());
    let m = canonical_sign(orthonormalize(&pairs[1].1, &n));
    let s = (2.0 * lambda[0] + lambda[1]).max(0.0);
    let r = if s > 0.0 {
        ((lambda[0] + 2.0 * lambda[1]) / s).clamp(0.0, 1.0)
    } else {
        0.0
    };
    SpectralData { lambda, n, m, s, r }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn diag(a: f64, b: f64, c: f64) -> QTensor {
        QTensor::from_matrix(&Matrix3::from_diagonal(&Vector3::new(a, b, c)))
    }

    fn random_q(rng: &mut ChaCha8Rng) -> QTensor {
        QTensor::new(std::array::from_fn(|_| rng.gen_range(-1.0..1.0)))
    }

    #[test]
    fn basis_roundtrip_and_norm() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..1000 {
            let q = random_q(&mut rng);
            let m = q.to_matrix();
            assert_abs_diff_eq!(m.trace(), 0.0, epsilon = 1e-14);
            assert_abs_diff_eq!((m - m.transpose()).norm(), 0.0, epsilon = 1e-14);
            assert_abs_diff_eq!(m.norm(), q.norm(), epsilon = 1e-14);
            assert!(QTensor::from_matrix(&m).max_abs_diff(&q) < 1e-14);
        }
    }

    #[test]
    fn from_director_examples() {
        let q = QTensor::from_director(&Vector3::z(), 1.0).unwrap();
        assert!(q.max_abs_diff(&diag(-1.0 / 3.0, -1.0 / 3.0, 2.0 / 3.0)) < 1e-15);
        let q = QTensor::from_director(&Vector3::x(), 1.5).unwrap();
        assert!(q.max_abs_diff(&diag(1.0, -0.5, -0.5)) < 1e-15);
        assert_abs_diff_eq!(q.norm(), 1.5 * (2.0f64 / 3.0).sqrt(), epsilon = 1e-15);
        let n = Vector3::new(0.6, 0.0, 0.8);
        assert_eq!(QTensor::from_director(&n, 0.0).unwrap().norm(), 0.0);
        assert!(matches!(
            QTensor::from_director(&Vector3::new(1.0, 1.0, 0.0), 1.0),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn spectral_examples() {
        let sp = diag(1.0, -0.5, -0.5).spectral();
        assert_abs_diff_eq!(sp.s, 1.5, epsilon = 1e-12);
        assert_abs_diff_eq!(sp.r, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(sp.n.x.abs(), 1.0, epsilon = 1e-12);

        let sp = diag(0.5, 0.0, -0.5).spectral();
        assert_abs_diff_eq!(sp.s, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(sp.r, 0.5, epsilon = 1e-12);

        let sp = QTensor::ZERO.spectral();
        assert_eq!((sp.s, sp.r), (0.0, 0.0));
    }

    #[test]
    fn spectral_ties_are_deterministic() {
        // λ1 = λ2: maximally biaxial, eigenvalues s/3, s/3, −2s/3
        let q = diag(1.0 / 3.0, 1.0 / 3.0, -2.0 / 3.0);
        let sp = q.spectral();
        assert_eq!(sp.n, Vector3::x());
        assert_abs_diff_eq!(sp.m.y, 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(sp.r, 1.0, epsilon = 1e-12);
        assert!((sp.reconstruct() - q.to_matrix()).norm() < 1e-12);
        // λ2 = λ3
        let q = diag(-0.5, 1.0, -0.5);
        let sp = q.spectral();
        assert_abs_diff_eq!(sp.n.y, 1.0, epsilon = 1e-14);
        assert_eq!(sp.m, Vector3::x());
        assert!((sp.reconstruct() - q.to_matrix()).norm() < 1e-12);
    }

    #[test]
    fn spectral_invariants_on_random_tensors() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20_000 {
            let q = random_q(&mut rng) * rng.gen_range(1e-3..10.0);
            let sp = q.spectral();
            let l = sp.lambda;
            assert!(l[0] >= l[1] && l[1] >= l[2]);
            assert!((l[0] + l[1] + l[2]).abs() < 1e-12);
            assert!((sp.n.norm() - 1.0).abs() < 1e-12 && (sp.m.norm() - 1.0).abs() < 1e-12);
            assert!(sp.n.dot(&sp.m).abs() < 1e-12);
            assert!((0.0..=1.0).contains(&sp.r));
            assert!((sp.s - (2.0 * l[0] + l[1])).abs() < 1e-12 * sp.s.max(1.0));
            let err = (sp.reconstruct() - q.to_matrix()).norm();
            assert!(err < 1e-10, "roundtrip error {err}");
            let big = sp.n.iamax();
            assert!(sp.n[big] > 0.0);
        }
    }

    #[test]
    fn projection_examples() {
        let s = 1.5;
        let q = diag(1.0, -0.5, -0.5);
        assert!(q.project_n(s).unwrap().max_abs_diff(&q) < 1e-12);
        let q3 = QTensor::from_director(&Vector3::z(), s).unwrap();
        assert!((q3 * 0.9).project_n(s).unwrap().max_abs_diff(&q3) < 1e-12);
        let p = Vector3::new(1.0, 2.0, 2.0) / 3.0;
        let biax = QTensor::from_matrix(&((Matrix3::identity() / 3.0 - p * p.transpose()) * 0.7));
        assert!(matches!(biax.project_n(s), Err(Error::DegenerateTensor(_))));
        assert!(matches!(QTensor::ZERO.dist_n(s), Err(Error::DegenerateTensor(_))));
    }

    #[test]
    fn dist_examples() {
        let s = 1.5;
        let q3 = QTensor::from_director(&Vector3::z(), s).unwrap();
        assert_abs_diff_eq!(q3.dist_n(s).unwrap(), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(
            (q3 * 0.9).dist_n(s).unwrap(),
            0.1 * 1.5 * (2.0f64 / 3.0).sqrt(),
            epsilon = 1e-12
        );
    }

    #[test]
    fn dist_matches_grid_search() {
        // brute force over unit vectors u on a fine (polar, azimuth) grid
        let s = 1.5;
        let q = diag(0.5, 0.0, -0.5);
        let mut best = f64::INFINITY;
        let steps = 720;
        for a in 0..=steps {
            let th = PI * a as f64 / steps as f64;
            for b in 0..(2 * steps) {
                let ph = PI * b as f64 / steps as f64;
                let u = Vector3::new(th.sin() * ph.cos(), th.sin() * ph.sin(), th.cos());
                let cand = q.to_matrix() - s * (u * u.transpose() - Matrix3::identity() / 3.0);
                best = best.min(cand.norm());
            }
        }
        assert_abs_diff_eq!(q.dist_n(s).unwrap(), best, epsilon = 1e-4);
    }

    #[test]
    fn biaxiality_examples() {
        let s = 1.5;
        let q = QTensor::from_director(&Vector3::x(), s).unwrap();
        assert_abs_diff_eq!(q.biaxiality_phi(s), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(diag(0.5, 0.0, -0.5).biaxiality_phi(s), 1.0 / 3.0, epsilon = 1e-12);
        assert_eq!(QTensor::ZERO.biaxiality_phi(s), 0.0);
        let biax = diag(1.0 / 3.0, 1.0 / 3.0, -2.0 / 3.0);
        assert_abs_diff_eq!(biax.biaxiality_phi(s), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn retraction_examples() {
        let s = 1.5;
        let q3 = QTensor::from_director(&Vector3::z(), s).unwrap();
        let half = q3 * 0.5;
        assert_eq!(half.retract_linf(s), half);
        assert!((q3 * 2.0).retract_linf(s).max_abs_diff(&q3) < 1e-15);
        assert_eq!(QTensor::ZERO.retract_linf(s), QTensor::ZERO);
    }

    #[test]
    fn azimuthal_examples() {
        let q3 = QTensor::from_director(&Vector3::z(), 0.8).unwrap();
        assert_abs_diff_eq!(q3.azimuthal_grad_sq(), 0.0, epsilon = 1e-15);
        let q1 = QTensor::from_director(&Vector3::x(), 1.0).unwrap();
        assert_abs_diff_eq!(q1.azimuthal_grad_sq(), 2.0, epsilon = 1e-14);
    }

    #[test]
    fn azimuthal_matches_finite_rotation() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let h = 1e-4;
        for _ in 0..200 {
            let q = random_q(&mut rng);
            let fd = (q.rotate(h) - q).norm_sq() / (h * h);
            assert!((fd - q.azimuthal_grad_sq()).abs() < 1e-6 * (1.0 + fd));
        }
    }

    #[test]
    fn rotation_examples() {
        let q3 = QTensor::from_director(&Vector3::z(), 1.3).unwrap();
        assert!(q3.rotate(0.77).max_abs_diff(&q3) < 1e-15);
        let q1 = QTensor::from_director(&Vector3::x(), 1.0).unwrap();
        let q2 = QTensor::from_director(&Vector3::y(), 1.0).unwrap();
        assert!(q1.rotate(PI / 2.0).max_abs_diff(&q2) < 1e-15);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let q = random_q(&mut rng);
        assert!(q.rotate(2.0 * PI).max_abs_diff(&q) < 1e-14);
    }
}
