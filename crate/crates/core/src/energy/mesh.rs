use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Polar `(r, θ)` grid over `1 ≤ r ≤ r_max`, `0 ≤ θ ≤ π`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MeshSpec {
    pub r_max: f64,
    pub n_r: usize,
    pub n_theta: usize,
    /// Ratio of consecutive radial spacings.
    pub stretch: f64,
}

impl Default for MeshSpec {
    fn default() -> Self {
        MeshSpec {
            r_max: 8.0,
            n_r: 128,
            n_theta: 96,
            stretch: 1.03,
        }
    }
}

impl MeshSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.r_max.is_finite() && self.r_max > 1.0) {
            return Err(Error::InvalidSpec(format!("r_max must exceed 1, got {}", self.r_max)));
        }
        if self.n_r < 8 || self.n_theta < 8 {
            return Err(Error::InvalidSpec(format!(
                "need at least 8 nodes per direction, got {} x {}",
                self.n_r, self.n_theta
            )));
        }
        if !(self.stretch.is_finite() && self.stretch >= 1.0) {
            return Err(Error::InvalidSpec(format!("stretch must be >= 1, got {}", self.stretch)));
        }
        Ok(())
    }
}

/// Geometry and quadrature weights derived from a [`MeshSpec`].
///
/// Node `(i, j)` sits at `(r[i], theta[j])` and has flat index
/// `i * n_theta + j`. The meridional Dirichlet energy is a sum over grid
/// edges `c_e |Q_a − Q_b|²`; point terms are lumped onto nodes with weights
/// collected from the four adjacent cells.
#[derive(Clone, Debug)]
pub struct Mesh {
    pub spec: MeshSpec,
    pub r: Vec<f64>,
    pub theta: Vec<f64>,
    /// Coefficient of the edge `(i, j)–(i+1, j)`; zero in the last row.
    pub coef_r: Vec<f64>,
    /// Coefficient of the edge `(i, j)–(i, j+1)`; zero in the last column.
    pub coef_theta: Vec<f64>,
    /// Lumped volume weight per node.
    pub mass: Vec<f64>,
    /// Lumped weight of the azimuthal density `|∂_φ Q|²`.
    pub azimuthal: Vec<f64>,
    pub volume: f64,
}

impl Mesh {
    #[inline]
    pub fn n_r(&self) -> usize {
        self.spec.n_r
    }

    #[inline]
    pub fn n_theta(&self) -> usize {
        self.spec.n_theta
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.spec.n_r * self.spec.n_theta
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.spec.n_theta + j
    }

    #[inline]
    pub fn coords(&self, n: usize) -> (usize, usize) {
        (n / self.spec.n_theta, n % self.spec.n_theta)
    }

    #[inline]
    pub fn is_dirichlet(&self, n: usize) -> bool {
        let i = n / self.spec.n_theta;
        i == 0 || i + 1 == self.spec.n_r
    }

    #[inline]
    pub fn is_axis(&self, n: usize) -> bool {
        let j = n % self.spec.n_theta;
        j == 0 || j + 1 == self.spec.n_theta
    }

    pub fn dtheta(&self) -> f64 {
        PI / (self.spec.n_theta - 1) as f64
    }

    /// Index of the radial node closest to `r`.
    pub fn nearest_r(&self, r: f64) -> usize {
        let pos = self.r.partition_point(|&x| x < r);
        if pos == 0 {
            0
        } else if pos >= self.r.len() {
            self.r.len() - 1
        } else if r - self.r[pos - 1] <= self.r[pos] - r {
            pos - 1
        } else {
            pos
        }
    }

    /// Index of the angular node closest to `theta`.
    pub fn nearest_theta(&self, theta: f64) -> usize {
        ((theta / self.dtheta()).round().max(0.0) as usize).min(self.spec.n_theta - 1)
    }
}

/// Radii `1 = r_0 < … < r_{n−1} = r_max` with spacings growing by `stretch`.
pub fn radial_nodes(spec: &MeshSpec) -> Vec<f64> {
    let n = spec.n_r;
    let span = spec.r_max - 1.0;
    let cells = (n - 1) as f64;
    let h0 = if spec.stretch == 1.0 {
        span / cells
    } else {
        span * (spec.stretch - 1.0) / (spec.stretch.powf(cells) - 1.0)
    };
    let mut r = Vec::with_capacity(n);
    let mut acc = 1.0;
    let mut h = h0;
    for _ in 0..n - 1 {
        r.push(acc);
        acc += h;
        h *= spec.stretch;
    }
    r.push(spec.r_max);
    r
}

pub fn build_mesh(spec: MeshSpec) -> Result<Mesh> {
    spec.validate()?;
    let (nr, nt) = (spec.n_r, spec.n_theta);
    let r = radial_nodes(&spec);
    let dth = PI / (nt - 1) as f64;
    let theta: Vec<f64> = (0..nt).map(|j| j as f64 * dth).collect();
    let len = nr * nt;
    let mut coef_r = vec![0.0; len];
    let mut coef_theta = vec![0.0; len];
    let mut mass = vec![0.0; len];
    let mut azimuthal = vec![0.0; len];
    let mut volume = 0.0;
    for i in 0..nr - 1 {
        let dr = r[i + 1] - r[i];
        let rc = 0.5 * (r[i] + r[i + 1]);
        for j in 0..nt - 1 {
            let tc = (j as f64 + 0.5) * dth;
            let rho = rc * tc.sin();
            let w = 2.0 * PI * rho * rc * dr * dth;
            volume += w;
            let quarter = 0.25 * w;
            let cr = quarter / (dr * dr);
            let ct = quarter / (rc * rc * dth * dth);
            coef_r[i * nt + j] += cr;
            coef_r[i * nt + j + 1] += cr;
            coef_theta[i * nt + j] += ct;
            coef_theta[(i + 1) * nt + j] += ct;
            let az = quarter / (2.0 * rho * rho);
            for n in [i * nt + j, i * nt + j + 1, (i + 1) * nt + j, (i + 1) * nt + j + 1] {
                mass[n] += quarter;
                azimuthal[n] += az;
            }
        }
    }
    Ok(Mesh {
        spec,
        r,
        theta,
        coef_r,
        coef_theta,
        mass,
        azimuthal,
        volume,
    })
}
