//! The one-dimensional radial problem
//!
//! ```text
//! I(r1, r2, a, b) = inf ∫ s*² n3'² / (1 − n3²) + √(3/2) (1 − n3²) dr,   n3(r1) = a, n3(r2) = b
//! ```
//!
//! with its explicit minimizer on the half line and a discrete minimizer for
//! general endpoint data.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `⁴√24`, the turning constant of the radial problem.
pub const K24: f64 = 2.213_363_839_400_643;

const SQRT_3_2: f64 = 1.224_744_871_391_589;

/// Parameters of a half-line profile starting at `n3 = cos θ` and relaxing
/// towards `sign`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProfileSpec {
    pub theta: f64,
    pub s_star: f64,
    pub sign: i8,
    pub t_max: f64,
    pub n_points: usize,
}

impl ProfileSpec {
    /// Spec with the default truncation `t_max = 40 s*/⁴√24` and `10⁴` intervals.
    pub fn new(theta: f64, s_star: f64, sign: i8) -> Result<Self> {
        let spec = ProfileSpec {
            theta,
            s_star,
            sign,
            t_max: default_t_max(s_star),
            n_points: 10_000,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_grid(mut self, t_max: f64, n_points: usize) -> Result<Self> {
        self.t_max = t_max;
        self.n_points = n_points;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=PI).contains(&self.theta) {
            return Err(Error::InvalidInput(format!(
                "theta must lie in [0, π], got {}",
                self.theta
            )));
        }
        if !(self.s_star.is_finite() && self.s_star > 0.0) {
            return Err(Error::InvalidInput(format!("s* must be positive, got {}", self.s_star)));
        }
        if self.sign != 1 && self.sign != -1 {
            return Err(Error::InvalidInput(format!("sign must be ±1, got {}", self.sign)));
        }
        if !(self.t_max.is_finite() && self.t_max > 0.0) {
            return Err(Error::InvalidInput(format!("t_max must be positive, got {}", self.t_max)));
        }
        if self.n_points < 2 {
            return Err(Error::InvalidInput("n_points must be at least 2".into()));
        }
        Ok(())
    }

    /// `A(θ) = (1 + cos θ) / (1 − cos θ)`; infinite at `θ = 0`.
    pub fn a_theta(&self) -> f64 {
        (1.0 + self.theta.cos()) / (1.0 - self.theta.cos())
    }
}

/// `40 s*/⁴√24`, where the tail factor `exp(−⁴√24 t/s*)` is `e^{−40}`.
pub fn default_t_max(s_star: f64) -> f64 {
    40.0 * s_star / K24
}

/// Point of the optimal profile with analytic derivative.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProfilePoint {
    pub t: f64,
    pub n3: f64,
    pub dn3: f64,
    /// `1 − n3²` evaluated without cancellation.
    pub one_minus_n3_sq: f64,
}

impl ProfilePoint {
    pub fn kinetic(&self, s_star: f64) -> f64 {
        if self.one_minus_n3_sq == 0.0 {
            return 0.0;
        }
        s_star * s_star * self.dn3 * self.dn3 / self.one_minus_n3_sq
    }

    pub fn potential(&self) -> f64 {
        SQRT_3_2 * self.one_minus_n3_sq
    }

    pub fn integrand(&self, s_star: f64) -> f64 {
        self.kinetic(s_star) + self.potential()
    }
}

/// Profile towards `+1` written with `u = 1 + cos θ`, `v = 1 − cos θ`, which
/// stays finite at both poles.
fn plus_profile(t: f64, theta: f64, s_star: f64) -> ProfilePoint {
    let (u, v) = (1.0 + theta.cos(), 1.0 - theta.cos());
    let rate = K24 / s_star;
    let e = (-rate * t).exp();
    let den = u + v * e;
    if den == 0.0 {
        // θ = π exactly: the datum −1 is stationary
        return ProfilePoint {
            t,
            n3: -1.0,
            dn3: 0.0,
            one_minus_n3_sq: 0.0,
        };
    }
    ProfilePoint {
        t,
        n3: if t == 0.0 { theta.cos() } else { (u - v * e) / den },
        dn3: 2.0 * u * v * rate * e / (den * den),
        one_minus_n3_sq: 4.0 * u * v * e / (den * den),
    }
}

/// The optimal profile point at scaled distance `t`.
pub fn optimal_point(t: f64, spec: &ProfileSpec) -> ProfilePoint {
    if spec.sign > 0 {
        plus_profile(t, spec.theta, spec.s_star)
    } else {
        let p = plus_profile(t, PI - spec.theta, spec.s_star);
        ProfilePoint {
            n3: -p.n3,
            dn3: -p.dn3,
            ..p
        }
    }
}

/// `n3(t, θ)` of the half-line minimizer.
pub fn optimal_n3(t: f64, spec: &ProfileSpec) -> f64 {
    optimal_point(t, spec).n3
}

/// `I(0, ∞, cos θ, ±1) = ⁴√24 s* (1 ∓ cos θ)`.
pub fn closed_form_i(theta: f64, sign: i8, s_star: f64) -> f64 {
    K24 * s_star * (1.0 - f64::from(sign.signum()) * theta.cos())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureResult {
    pub value: f64,
    pub closed_form: f64,
    pub warnings: Vec<String>,
}

/// Composite Simpson integral of the integrand along the optimal profile.
pub fn quadrature_i(spec: &ProfileSpec) -> Result<QuadratureResult> {
    spec.validate()?;
    let mut warnings = Vec::new();
    let tail = (-K24 * spec.t_max / spec.s_star).exp();
    if tail >= 1e-12 {
        warnings.push(format!(
            "t_max = {} leaves a tail factor exp(-k t_max/s*) = {tail:e} >= 1e-12",
            spec.t_max
        ));
    }
    let closed_form = closed_form_i(spec.theta, spec.sign, spec.s_star);
    let antipodal = (spec.sign > 0 && spec.theta == PI) || (spec.sign < 0 && spec.theta == 0.0);
    if antipodal {
        warnings.push(
            "datum is antipodal to the target; the infimum is not attained and the closed form is reported"
                .into(),
        );
        return Ok(QuadratureResult {
            value: closed_form,
            closed_form,
            warnings,
        });
    }
    let mut n = spec.n_points;
    if n % 2 == 1 {
        n += 1;
    }
    if n < 1000 {
        warnings.push(format!("only {n} Simpson intervals; accuracy may be poor"));
    }
    let h = spec.t_max / n as f64;
    let f = |k: usize| optimal_point(k as f64 * h, spec).integrand(spec.s_star);
    let mut acc = f(0) + f(n);
    for k in 1..n {
        acc += if k % 2 == 1 { 4.0 } else { 2.0 } * f(k);
    }
    Ok(QuadratureResult {
        value: acc * h / 3.0,
        closed_form,
        warnings,
    })
}

/// Samples `(t, n3, integrand)` on a uniform grid.
pub fn sample_profile(spec: &ProfileSpec) -> Vec<(f64, f64, f64)> {
    let n = spec.n_points;
    (0..=n)
        .map(|k| {
            let p = optimal_point(spec.t_max * k as f64 / n as f64, spec);
            (p.t, p.n3, p.integrand(spec.s_star))
        })
        .collect()
}

/// Result of [`minimize_i`]: the discrete minimum and the minimizing `n3` path.
#[derive(Clone, Debug, PartialEq)]
pub struct MinimizedProfile {
    pub value: f64,
    pub path: Vec<f64>,
    pub iterations: usize,
}

/// Options for [`minimize_i`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MinimizeIOptions {
    pub max_iter: usize,
    /// Stop when the predicted decrease falls below `tol·(1 + value)`.
    pub tol: f64,
}

impl Default for MinimizeIOptions {
    fn default() -> Self {
        MinimizeIOptions {
            max_iter: 20_000,
            tol: 1e-14,
        }
    }
}

/// Lower bound `⁴√24 s* |b − a|` for any interval.
pub fn turning_lower_bound(a_val: f64, b_val: f64, s_star: f64) -> f64 {
    K24 * s_star * (b_val - a_val).abs()
}

/// Discrete minimum of `I(r1, r2, a, b)` on `n_points` uniform nodes.
pub fn minimize_i(
    r1: f64,
    r2: f64,
    a_val: f64,
    b_val: f64,
    s_star: f64,
    n_points: usize,
) -> Result<MinimizedProfile> {
    minimize_i_with(r1, r2, a_val, b_val, s_star, n_points, MinimizeIOptions::default())
}

/// [`minimize_i`] with explicit solver options.
///
/// The path is parametrised as `n3 = cos ψ`, which turns the integrand into
/// `s*² ψ'² + √(3/2) sin² ψ` and removes the singular weight. Iterates are
/// projected onto `ψ ∈ [0, π]`, i.e. `n3 ∈ [−1, 1]`.
pub fn minimize_i_with(
    r1: f64,
    r2: f64,
    a_val: f64,
    b_val: f64,
    s_star: f64,
    n_points: usize,
    opts: MinimizeIOptions,
) -> Result<MinimizedProfile> {
    for (name, v) in [("a", a_val), ("b", b_val)] {
        if !(-1.0..=1.0).contains(&v) {
            return Err(Error::InvalidInput(format!("{name} must lie in [-1, 1], got {v}")));
        }
    }
    if !(r1.is_finite() && r2.is_finite() && r1 < r2) {
        return Err(Error::InvalidInput(format!("need finite r1 < r2, got {r1}, {r2}")));
    }
    if n_points < 3 {
        return Err(Error::InvalidInput("n_points must be at least 3".into()));
    }
    if !(s_star > 0.0) {
        return Err(Error::InvalidInput(format!("s* must be positive, got {s_star}")));
    }
    let n = n_points;
    let h = (r2 - r1) / (n - 1) as f64;
    let kin = s_star * s_star / h;
    let pot = |k: usize| if k == 0 || k == n - 1 { 0.5 * h } else { h } * SQRT_3_2;

    let energy = |psi: &[f64]| -> f64 {
        let mut e = 0.0;
        for k in 0..n - 1 {
            let d = psi[k + 1] - psi[k];
            e += kin * d * d;
        }
        for (k, p) in psi.iter().enumerate() {
            let s = p.sin();
            e += pot(k) * s * s;
        }
        e
    };
    let gradient = |psi: &[f64], g: &mut [f64]| {
        g[0] = 0.0;
        g[n - 1] = 0.0;
        for k in 1..n - 1 {
            g[k] = kin * 2.0 * (2.0 * psi[k] - psi[k - 1] - psi[k + 1]) + pot(k) * (2.0 * psi[k]).sin();
        }
    };

    let (pa, pb) = (a_val.acos(), b_val.acos());
    let mut psi: Vec<f64> = (0..n)
        .map(|k| pa + (pb - pa) * k as f64 / (n - 1) as f64)
        .collect();
    // nudge off the unstable straight path when both ends sit at poles
    if (pa - pb).abs() > 0.0 {
        for (k, p) in psi.iter_mut().enumerate().take(n - 1).skip(1) {
            let x = k as f64 / (n - 1) as f64;
            *p = (*p + 1e-3 * (PI * x).sin() * (pb - pa).signum()).clamp(0.0, PI);
        }
    }

    // Sobolev preconditioner: 2 kin (−Δ) + 2√(3/2) h, tridiagonal SPD on interior nodes
    let m = n - 2;
    let diag = 4.0 * kin + 2.0 * SQRT_3_2 * h;
    let off = -2.0 * kin;
    let solve = |rhs: &[f64], out: &mut [f64]| {
        // Thomas algorithm for the constant-coefficient tridiagonal system
        let mut c = vec![0.0; m];
        let mut d = vec![0.0; m];
        c[0] = off / diag;
        d[0] = rhs[0] / diag;
        for k in 1..m {
            let den = diag - off * c[k - 1];
            c[k] = off / den;
            d[k] = (rhs[k] - off * d[k - 1]) / den;
        }
        out[m - 1] = d[m - 1];
        for k in (0..m - 1).rev() {
            out[k] = d[k] - c[k] * out[k + 1];
        }
    };

    let mut g = vec![0.0; n];
    let mut dir = vec![0.0; m];
    let mut trial = psi.clone();
    let mut e = energy(&psi);
    let mut step: f64 = 1.0;
    for iter in 0..opts.max_iter {
        gradient(&psi, &mut g);
        solve(&g[1..n - 1], &mut dir);
        let decrement: f64 = g[1..n - 1].iter().zip(&dir).map(|(a, b)| a * b).sum();
        if decrement <= opts.tol * (1.0 + e.abs()) {
            return Ok(MinimizedProfile {
                value: e,
                path: psi.iter().map(|p| p.cos()).collect(),
                iterations: iter,
            });
        }
        step = (step * 2.0).min(1.0);
        loop {
            for k in 1..n - 1 {
                trial[k] = (psi[k] - step * dir[k - 1]).clamp(0.0, PI);
            }
            let et = energy(&trial);
            if et <= e - 1e-4 * step * decrement || step < 1e-12 {
                if et <= e {
                    std::mem::swap(&mut psi, &mut trial);
                    e = et;
                }
                break;
            }
            step *= 0.5;
        }
        if step < 1e-12 {
            // projection blocks every descent step: treat as converged on the box
            return Ok(MinimizedProfile {
                value: e,
                path: psi.iter().map(|p| p.cos()).collect(),
                iterations: iter + 1,
            });
        }
    }
    gradient(&psi, &mut g);
    solve(&g[1..n - 1], &mut dir);
    let residual: f64 = g[1..n - 1].iter().zip(&dir).map(|(a, b)| a * b).sum();
    Err(Error::ProfileNotConverged {
        iterations: opts.max_iter,
        residual,
        value: e,
        path: psi.iter().map(|p| p.cos()).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn constant_matches_fourth_root() {
        assert_abs_diff_eq!(K24, 24f64.powf(0.25), epsilon = 1e-15);
    }

    #[test]
    fn optimal_n3_examples() {
        let spec = ProfileSpec::new(PI / 2.0, 1.0, 1).unwrap();
        assert_abs_diff_eq!(optimal_n3(0.0, &spec), 0.0, epsilon = 1e-15);
        let t = 3f64.ln() / K24;
        assert_abs_diff_eq!(optimal_n3(t, &spec), 0.5, epsilon = 1e-14);
        let pole = ProfileSpec::new(0.0, 1.0, 1).unwrap();
        for t in [0.0, 0.3, 5.0] {
            assert_eq!(optimal_n3(t, &pole), 1.0);
        }
        let spec = ProfileSpec::new(2.0, 1.5, 1).unwrap();
        assert_eq!(optimal_n3(0.0, &spec), 2f64.cos());
        let mut last = f64::NEG_INFINITY;
        for k in 0..200 {
            let v = optimal_n3(k as f64 * 0.05, &spec);
            assert!(v > last && v < 1.0);
            last = v;
        }
    }

    #[test]
    fn minus_profile_mirrors_plus() {
        let spec = ProfileSpec::new(1.1, 1.5, -1).unwrap();
        let mirror = ProfileSpec::new(PI - 1.1, 1.5, 1).unwrap();
        assert_abs_diff_eq!(optimal_n3(0.0, &spec), 1.1f64.cos(), epsilon = 1e-15);
        for t in [0.0, 0.4, 2.0] {
            assert_eq!(optimal_n3(t, &spec), -optimal_n3(t, &mirror));
        }
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(closed_form_i(0.0, 1, 1.0), 0.0);
        assert_abs_diff_eq!(closed_form_i(PI / 2.0, 1, 1.0), 2.213364, epsilon = 1e-6);
        assert_abs_diff_eq!(closed_form_i(PI / 2.0, -1, 1.0), 2.213364, epsilon = 1e-6);
        assert_abs_diff_eq!(closed_form_i(PI / 3.0, 1, 1.5), K24 * 0.75, epsilon = 1e-14);
    }

    #[test]
    fn quadrature_examples() {
        let spec = ProfileSpec::new(PI / 2.0, 1.0, 1).unwrap().with_grid(20.0, 10_000).unwrap();
        let q = quadrature_i(&spec).unwrap();
        assert_abs_diff_eq!(q.value, 2.213364, epsilon = 1e-6);
        assert!(q.warnings.is_empty());

        let q = quadrature_i(&ProfileSpec::new(0.0, 1.0, 1).unwrap()).unwrap();
        assert_abs_diff_eq!(q.value, 0.0, epsilon = 1e-12);

        let q = quadrature_i(&ProfileSpec::new(2.5, 1.5, 1).unwrap()).unwrap();
        assert_abs_diff_eq!(q.value, closed_form_i(2.5, 1, 1.5), epsilon = 1e-6);
    }

    #[test]
    fn quadrature_warns_on_short_domain() {
        let spec = ProfileSpec::new(1.0, 1.0, 1).unwrap().with_grid(2.0, 100).unwrap();
        let q = quadrature_i(&spec).unwrap();
        assert_eq!(q.warnings.len(), 2);
    }

    #[test]
    fn invalid_specs_are_rejected() {
        assert!(ProfileSpec::new(4.0, 1.0, 1).is_err());
        assert!(ProfileSpec::new(1.0, 1.0, 0).is_err());
        assert!(ProfileSpec::new(1.0, -1.0, 1).is_err());
    }

    #[test]
    fn equipartition_and_tail() {
        for &theta in &[0.2, 1.0, PI / 2.0, 2.5, 3.1] {
            for sign in [1, -1] {
                let spec = ProfileSpec::new(theta, 1.5, sign).unwrap();
                let a = if sign > 0 { spec.a_theta() } else { 1.0 / spec.a_theta() };
                for k in 0..400 {
                    let t = k as f64 * 0.05;
                    let p = optimal_point(t, &spec);
                    assert!((p.kinetic(1.5) - p.potential()).abs() <= 1e-10);
                    let e = (-K24 * t / 1.5).exp();
                    assert!((1.0 - p.n3 * f64::from(sign)).abs() <= 2.0 / a * e + 1e-15);
                }
            }
        }
    }

    #[test]
    fn minimize_examples() {
        let r = minimize_i(0.0, 40.0, 0.0, 1.0, 1.0, 4000).unwrap();
        assert!((r.value - 2.213364).abs() <= 5e-3, "{}", r.value);
        assert!(r.path.iter().all(|v| v.abs() <= 1.0));

        let r = minimize_i(0.0, 40.0, -1.0, 1.0, 1.0, 4000).unwrap();
        assert!(r.value >= 2.0 * K24 - 5e-3, "{}", r.value);
        assert!(r.value <= 2.0 * K24 + 5e-3, "{}", r.value);

        let r = minimize_i(0.0, 1.0, 0.3, 0.3, 1.0, 1000).unwrap();
        assert!(r.value <= SQRT_3_2 * (1.0 - 0.09));
        assert!(r.value >= turning_lower_bound(0.3, 0.3, 1.0));
    }

    #[test]
    fn minimize_rejects_bad_input() {
        assert!(minimize_i(0.0, 1.0, 1.2, 0.0, 1.0, 100).is_err());
        assert!(minimize_i(1.0, 1.0, 0.0, 0.0, 1.0, 100).is_err());
    }

    #[test]
    fn minimize_reports_non_convergence_with_iterate() {
        let opts = MinimizeIOptions { max_iter: 1, tol: 0.0 };
        match minimize_i_with(0.0, 10.0, -0.5, 0.5, 1.0, 200, opts) {
            Err(Error::ProfileNotConverged { path, value, .. }) => {
                assert_eq!(path.len(), 200);
                assert!(value.is_finite());
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}
