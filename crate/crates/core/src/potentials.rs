//! Bulk potential `f`, field potential `g` and the parameter set tying the
//! energy terms together.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qtensor::QTensor;

const SQRT_2_3: f64 = 0.816_496_580_927_726_f64;

/// Relative norm floor below which [`field_grad`] refuses to evaluate.
pub const G_NORM_FLOOR: f64 = 1e-8;

/// Physical and derived parameters.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    /// Additive constant making `min f = 0`.
    #[serde(rename = "C")]
    pub c_const: f64,
    pub s_star: f64,
    pub xi: f64,
    pub eta: f64,
    pub beta: f64,
}

fn check_coefficients(a: f64, b: f64, c: f64) -> Result<()> {
    for (name, v) in [("a", a), ("b", b), ("c", c)] {
        if !(v.is_finite() && v > 0.0) {
            return Err(Error::InvalidInput(format!(
                "bulk coefficient {name} must be positive, got {v}"
            )));
        }
    }
    Ok(())
}

/// `s* = (b + √(b² + 24ac)) / 4c`.
pub fn s_star(a: f64, b: f64, c: f64) -> Result<f64> {
    check_coefficients(a, b, c)?;
    Ok((b + (b * b + 24.0 * a * c).sqrt()) / (4.0 * c))
}

/// The constant `C` with `f = 0` on the vacuum manifold.
pub fn bulk_constant(a: f64, b: f64, c: f64) -> Result<f64> {
    let s = s_star(a, b, c)?;
    let s2 = s * s;
    Ok(a / 3.0 * s2 + 2.0 * b / 27.0 * s2 * s - c / 9.0 * s2 * s2)
}

impl ModelParams {
    /// Builds parameters from bulk coefficients and exactly two of
    /// `beta`, `eta`, `xi`; the third follows from `η |ln ξ| = β`.
    pub fn new(
        a: f64,
        b: f64,
        c: f64,
        beta: Option<f64>,
        eta: Option<f64>,
        xi: Option<f64>,
    ) -> Result<Self> {
        let s_star = s_star(a, b, c)?;
        let c_const = bulk_constant(a, b, c)?;
        let positive = |name: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(v)
            } else {
                Err(Error::InvalidInput(format!("{name} must be positive, got {v}")))
            }
        };
        let xi_ok = |v: f64| {
            if v > 0.0 && v < 1.0 {
                Ok(v)
            } else {
                Err(Error::InvalidInput(format!("xi must lie in (0, 1), got {v}")))
            }
        };
        let (beta, eta, xi) = match (beta, eta, xi) {
            (Some(beta), Some(eta), None) => {
                let (beta, eta) = (positive("beta", beta)?, positive("eta", eta)?);
                (beta, eta, (-beta / eta).exp())
            }
            (Some(beta), None, Some(xi)) => {
                let (beta, xi) = (positive("beta", beta)?, xi_ok(xi)?);
                (beta, beta / xi.ln().abs(), xi)
            }
            (None, Some(eta), Some(xi)) => {
                let (eta, xi) = (positive("eta", eta)?, xi_ok(xi)?);
                (eta * xi.ln().abs(), eta, xi)
            }
            _ => {
                return Err(Error::InvalidInput(
                    "exactly two of beta, eta, xi must be given".into(),
                ))
            }
        };
        Ok(ModelParams {
            a,
            b,
            c,
            c_const,
            s_star,
            xi,
            eta,
            beta,
        })
    }

    /// `a = b = c = 1` with the given `β` and `η`.
    pub fn unit_material(beta: f64, eta: f64) -> Result<Self> {
        Self::new(1.0, 1.0, 1.0, Some(beta), Some(eta), None)
    }

    /// Residual of `η |ln ξ| = β`.
    pub fn regime_residual(&self) -> f64 {
        self.eta * self.xi.ln().abs() - self.beta
    }
}

/// `f(Q) = C − (a/2) tr Q² − (b/3) tr Q³ + (c/4) (tr Q²)²`.
pub fn bulk_f(q: &QTensor, p: &ModelParams) -> f64 {
    let t2 = q.norm_sq();
    let t3 = q.trace_cube();
    p.c_const - 0.5 * p.a * t2 - p.b / 3.0 * t3 + 0.25 * p.c * t2 * t2
}

/// Gradient of [`bulk_f`] in `Sym₀`: `−aQ − b(Q² − tr Q²/3 Id) + c tr Q² Q`.
pub fn bulk_grad(q: &QTensor, p: &ModelParams) -> QTensor {
    let m = q.to_matrix();
    let q2 = QTensor::from_matrix(&(m * m));
    let t2 = q.norm_sq();
    *q * (-p.a + p.c * t2) - q2 * p.b
}

/// `g(Q) = √(2/3) − Q₃₃/|Q|`, and `0` at `Q = 0`.
pub fn field_g(q: &QTensor) -> f64 {
    let norm = q.norm();
    if norm == 0.0 {
        return 0.0;
    }
    (SQRT_2_3 * (1.0 - q.coords[4] / norm)).max(0.0)
}

/// Gradient of [`field_g`]. Errors when `|Q| < 1e-8 s*`.
pub fn field_grad(q: &QTensor, s_star: f64) -> Result<QTensor> {
    let norm = q.norm();
    let floor = G_NORM_FLOOR * s_star;
    if norm < floor {
        return Err(Error::NearZeroTensor { norm, floor });
    }
    Ok(field_grad_unchecked(q, norm))
}

#[inline]
pub(crate) fn field_grad_unchecked(q: &QTensor, norm: f64) -> QTensor {
    let q5 = q.coords[4];
    let mut out = *q * (SQRT_2_3 * q5 / (norm * norm * norm));
    out.coords[4] -= SQRT_2_3 / norm;
    out
}

/// `g` restricted to the vacuum manifold: `√(3/2)(1 − n₃²)`.
pub fn g_on_n(n3: f64) -> Result<f64> {
    if !(-1.0..=1.0).contains(&n3) {
        return Err(Error::InvalidInput(format!("n3 must lie in [-1, 1], got {n3}")));
    }
    Ok(1.5f64.sqrt() * (1.0 - n3 * n3))
}
