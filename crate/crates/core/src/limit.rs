//! The limit functional on axisymmetric subsets `F` of the unit sphere:
//!
//! ```text
//! E0(F) = ⁴√24 s* ∫_F (1 − cos θ) dω + ⁴√24 s* ∫_{F^c} (1 + cos θ) dω + (π/2) s*² β Per(F)
//! ```
//!
//! For a single interface at `θ_d` this reduces to
//! `4 ⁴√24 π s* (sin⁴(θ_d/2) + cos⁴(θ_d/2)) + π² β s*² sin θ_d`.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::profile::K24;

/// `E0` for `F = {θ < θ_d}`.
pub fn limit_energy(theta_d: f64, beta: f64, s_star: f64) -> f64 {
    let (s, c) = (0.5 * theta_d).sin_cos();
    4.0 * K24 * PI * s_star * (s.powi(4) + c.powi(4)) + PI * PI * beta * s_star * s_star * theta_d.sin()
}

/// Pointwise alignment costs `(⁴√24 s*(1 − cos θ), ⁴√24 s*(1 + cos θ))` of
/// a direction in `F` and in `F^c`.
pub fn closed_form_limit_coefficients(theta: f64, s_star: f64) -> (f64, f64) {
    let c = theta.cos();
    (K24 * s_star * (1.0 - c), K24 * s_star * (1.0 + c))
}

/// `dE0/dθ_d = π s* cos θ_d (π β s* − 4 ⁴√24 sin θ_d)`.
pub fn limit_energy_derivative(theta_d: f64, beta: f64, s_star: f64) -> f64 {
    PI * s_star * theta_d.cos() * (PI * beta * s_star - 4.0 * K24 * theta_d.sin())
}

/// Which set the polar cap around `θ = 0` belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Region {
    F,
    Fc,
}

impl Region {
    fn flip(self) -> Region {
        match self {
            Region::F => Region::Fc,
            Region::Fc => Region::F,
        }
    }
}

/// `E0` for a union of latitude bands separated by `interfaces`; the band
/// touching `θ = 0` has label `first`.
pub fn limit_energy_bandset(interfaces: &[f64], first: Region, beta: f64, s_star: f64) -> Result<f64> {
    for w in interfaces.windows(2) {
        if w[1] <= w[0] {
            return Err(Error::InvalidInput(format!(
                "interfaces must be strictly increasing, got {interfaces:?}"
            )));
        }
    }
    if interfaces.iter().any(|&t| !(t > 0.0 && t < PI)) {
        return Err(Error::InvalidInput(format!(
            "interfaces must lie strictly inside (0, π), got {interfaces:?}"
        )));
    }
    // antiderivatives of (1 ∓ cos θ) sin θ
    let anti_f = |t: f64| -t.cos() - 0.5 * t.sin().powi(2);
    let anti_fc = |t: f64| -t.cos() + 0.5 * t.sin().powi(2);
    let mut edges = Vec::with_capacity(interfaces.len() + 2);
    edges.push(0.0);
    edges.extend_from_slice(interfaces);
    edges.push(PI);
    let mut label = first;
    let mut area = 0.0;
    for w in edges.windows(2) {
        area += match label {
            Region::F => anti_f(w[1]) - anti_f(w[0]),
            Region::Fc => anti_fc(w[1]) - anti_fc(w[0]),
        };
        label = label.flip();
    }
    let perimeter: f64 = 2.0 * PI * interfaces.iter().map(|t| t.sin()).sum::<f64>();
    Ok(2.0 * PI * K24 * s_star * area + 0.5 * PI * s_star * s_star * beta * perimeter)
}

/// `(β_equal, β_spinodal) = (2 ⁴√24/(π s*), 4 ⁴√24/(π s*))`.
pub fn critical_betas(s_star: f64) -> (f64, f64) {
    (2.0 * K24 / (PI * s_star), 4.0 * K24 / (PI * s_star))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StationaryKind {
    LocalMin,
    LocalMax,
    BoundaryMin,
    Degenerate,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StationaryPoint {
    pub theta: f64,
    pub kind: StationaryKind,
    pub energy: f64,
}

fn classify(theta: f64, beta: f64, s_star: f64) -> StationaryKind {
    let h = 1e-6;
    let d = |t: f64| limit_energy_derivative(t, beta, s_star);
    let sign = |v: f64| if v.abs() < 1e-13 { 0 } else if v > 0.0 { 1 } else { -1 };
    if theta == 0.0 {
        return match sign(d(h)) {
            1 => StationaryKind::BoundaryMin,
            -1 => StationaryKind::LocalMax,
            _ => StationaryKind::Degenerate,
        };
    }
    if theta == PI {
        return match sign(d(PI - h)) {
            -1 => StationaryKind::BoundaryMin,
            1 => StationaryKind::LocalMax,
            _ => StationaryKind::Degenerate,
        };
    }
    match (sign(d(theta - h)), sign(d(theta + h))) {
        (-1, 1) => StationaryKind::LocalMin,
        (1, -1) => StationaryKind::LocalMax,
        _ => StationaryKind::Degenerate,
    }
}

/// Stationary points of `θ_d ↦ E0(θ_d)` on `[0, π]`, sorted by angle.
pub fn stationary_angles(beta: f64, s_star: f64) -> Vec<StationaryPoint> {
    let mut thetas = vec![0.0, FRAC_PI_2, PI];
    let ratio = PI * beta * s_star / (4.0 * K24);
    if ratio < 1.0 {
        let t2 = ratio.asin();
        if t2 > 0.0 {
            thetas.push(t2);
            thetas.push(PI - t2);
        }
    }
    thetas.sort_by(f64::total_cmp);
    thetas.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    thetas
        .into_iter()
        .map(|theta| StationaryPoint {
            theta,
            kind: classify(theta, beta, s_star),
            energy: limit_energy(theta, beta, s_star),
        })
        .collect()
}

/// Configuration label along a continuation trace.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Branch {
    DP,
    SR,
    Other,
}

impl Branch {
    pub fn of(theta: f64) -> Branch {
        if theta < 0.01 || theta > PI - 0.01 {
            Branch::DP
        } else if (theta - FRAC_PI_2).abs() < 0.01 {
            Branch::SR
        } else {
            Branch::Other
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Branch::DP => "DP",
            Branch::SR => "SR",
            Branch::Other => "other",
        })
    }
}

impl FromStr for Branch {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "dp" | "dipole" => Ok(Branch::DP),
            "sr" | "saturn" => Ok(Branch::SR),
            "other" => Ok(Branch::Other),
            _ => Err(Error::InvalidInput(format!("unknown branch `{s}` (expected dp or sr)"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub beta: f64,
    pub theta_d: f64,
    pub energy: f64,
    pub branch: Branch,
    /// `θ_d` moved by more than 0.3 rad since the previous record.
    pub jumped: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct LimitTrace {
    pub records: Vec<TraceRecord>,
}

impl LimitTrace {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("beta,theta_d,energy,branch\n");
        for r in &self.records {
            out.push_str(&format!("{:.12},{:.12},{:.12},{}\n", r.beta, r.theta_d, r.energy, r.branch));
        }
        out
    }

    /// Records where the configuration jumped.
    pub fn jumps(&self) -> impl Iterator<Item = &TraceRecord> {
        self.records.iter().filter(|r| r.jumped)
    }
}

pub const DESCENT_STEP: f64 = 1e-3;
pub const DESCENT_MAX_ITER: usize = 10_000;
pub const JUMP_THRESHOLD: f64 = 0.3;
const PERTURBATION: f64 = 1e-6;

/// Local descent on `θ_d` with fixed-size steps against the sign of the
/// derivative, halving the step whenever the sign flips.
pub fn descend(theta0: f64, beta: f64, s_star: f64) -> f64 {
    let mut theta = theta0.clamp(0.0, PI);
    let mut h = DESCENT_STEP;
    let mut last_sign = 0.0;
    for _ in 0..DESCENT_MAX_ITER {
        let d = limit_energy_derivative(theta, beta, s_star);
        if d == 0.0 || h < 1e-12 {
            break;
        }
        let sign = d.signum();
        if last_sign != 0.0 && sign != last_sign {
            h *= 0.5;
        }
        last_sign = sign;
        let next = (theta - sign * h).clamp(0.0, PI);
        if next == theta {
            break;
        }
        theta = next;
    }
    theta
}

/// Quasi-static continuation of `θ_d` over `n_steps` equal β increments.
///
/// Before each descent the state is nudged by `1e-6` (off a pole into the
/// interior, elsewhere towards `θ = 0`) so that degenerate stationary points
/// are left deterministically.
pub fn hysteresis_sweep(
    beta_from: f64,
    beta_to: f64,
    n_steps: usize,
    s_star: f64,
    start: Branch,
) -> Result<LimitTrace> {
    if n_steps < 2 {
        return Err(Error::InvalidInput("n_steps must be at least 2".into()));
    }
    if beta_from < 0.0 || beta_to < 0.0 {
        return Err(Error::InvalidInput("beta must be non-negative".into()));
    }
    let mut theta = match start {
        Branch::DP => 0.0,
        Branch::SR => FRAC_PI_2,
        Branch::Other => {
            return Err(Error::InvalidInput("a sweep must start on the DP or SR branch".into()))
        }
    };
    let mut trace = LimitTrace::default();
    for k in 0..=n_steps {
        let beta = beta_from + (beta_to - beta_from) * k as f64 / n_steps as f64;
        let previous = theta;
        let nudged = if theta <= 0.0 {
            PERTURBATION
        } else if theta >= PI {
            PI - PERTURBATION
        } else {
            theta - PERTURBATION
        };
        theta = descend(nudged, beta, s_star);
        // snap the residue of the nudge back onto exact stationary angles
        for exact in [0.0, FRAC_PI_2, PI] {
            if (theta - exact).abs() <= 2.0 * PERTURBATION {
                theta = exact;
            }
        }
        trace.records.push(TraceRecord {
            beta,
            theta_d: theta,
            energy: limit_energy(theta, beta, s_star),
            branch: Branch::of(theta),
            jumped: k > 0 && (theta - previous).abs() > JUMP_THRESHOLD,
        });
    }
    Ok(trace)
}

/// `(θ_d, E0)` samples on a uniform grid with `n` intervals.
pub fn landscape(beta: f64, s_star: f64, n: usize) -> Vec<(f64, f64)> {
    (0..=n)
        .map(|k| {
            let t = PI * k as f64 / n as f64;
            (t, limit_energy(t, beta, s_star))
        })
        .collect()
}

/// Best band set with exactly `count` interfaces on a grid of interior
/// angles (`step_deg` spacing, both labels of the polar cap).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BandSetOptimum {
    pub interfaces: Vec<f64>,
    pub first: Region,
    pub energy: f64,
}

pub fn best_band_set(count: usize, beta: f64, s_star: f64, step_deg: usize) -> Result<BandSetOptimum> {
    if step_deg == 0 || 180 % step_deg != 0 {
        return Err(Error::InvalidInput(format!("step_deg must divide 180, got {step_deg}")));
    }
    let grid: Vec<f64> = (1..180 / step_deg)
        .map(|k| (k * step_deg) as f64 * PI / 180.0)
        .collect();
    let mut best: Option<BandSetOptimum> = None;
    let mut consider = |ifs: Vec<f64>, first: Region| -> Result<()> {
        let e = limit_energy_bandset(&ifs, first, beta, s_star)?;
        if best.as_ref().is_none_or(|b| e < b.energy) {
            best = Some(BandSetOptimum {
                interfaces: ifs,
                first,
                energy: e,
            });
        }
        Ok(())
    };
    for first in [Region::F, Region::Fc] {
        match count {
            0 => consider(vec![], first)?,
            1 => {
                for &a in &grid {
                    consider(vec![a], first)?;
                }
            }
            2 => {
                for (i, &a) in grid.iter().enumerate() {
                    for &b in &grid[i + 1..] {
                        consider(vec![a, b], first)?;
                    }
                }
            }
            _ => return Err(Error::InvalidInput("only 0, 1 or 2 interfaces are enumerated".into())),
        }
    }
    Ok(best.expect("non-empty enumeration"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn limit_energy_examples() {
        assert_abs_diff_eq!(limit_energy(0.0, 2.3, 1.0), 4.0 * K24 * PI, epsilon = 1e-12);
        assert_abs_diff_eq!(limit_energy(0.0, 0.0, 1.0), 27.8139503, epsilon = 1e-6);
        assert_abs_diff_eq!(limit_energy(FRAC_PI_2, 0.0, 1.0), 2.0 * K24 * PI, epsilon = 1e-12);
        assert_abs_diff_eq!(limit_energy(PI, 0.7, 2.0), limit_energy(0.0, 0.7, 2.0), epsilon = 1e-12);
        let (be, _) = critical_betas(1.0);
        assert_abs_diff_eq!(limit_energy(FRAC_PI_2, be, 1.0), limit_energy(0.0, be, 1.0), epsilon = 1e-12);
    }

    #[test]
    fn bandset_examples() {
        for &t in &[0.3, 1.0, FRAC_PI_2, 2.7] {
            let e = limit_energy_bandset(&[t], Region::F, 1.3, 1.5).unwrap();
            assert_abs_diff_eq!(e, limit_energy(t, 1.3, 1.5), epsilon = 1e-12);
        }
        let whole = limit_energy_bandset(&[], Region::F, 1.0, 1.0).unwrap();
        assert_abs_diff_eq!(whole, 4.0 * PI * K24, epsilon = 1e-12);
        assert!(limit_energy_bandset(&[1.0, 0.5], Region::F, 1.0, 1.0).is_err());
        assert!(limit_energy_bandset(&[1.0, 1.0], Region::F, 1.0, 1.0).is_err());
        assert!(limit_energy_bandset(&[0.0], Region::F, 1.0, 1.0).is_err());
    }

    #[test]
    fn critical_values() {
        let (a, b) = critical_betas(1.0);
        assert_abs_diff_eq!(a, 2.0 * 24f64.powf(0.25) / PI, epsilon = 1e-12);
        assert_abs_diff_eq!(a, 1.409071, epsilon = 1e-6);
        assert_abs_diff_eq!(b, 2.818142, epsilon = 1e-6);
        assert_eq!(format!("{a:.3}"), "1.409");
        assert_eq!(format!("{b:.3}"), "2.818");
        let (c, d) = critical_betas(1.5);
        assert_abs_diff_eq!(c, a / 1.5, epsilon = 1e-15);
        assert_abs_diff_eq!(d, b / 1.5, epsilon = 1e-15);
    }

    #[test]
    fn stationary_examples() {
        let pts = stationary_angles(0.0, 1.0);
        let kind = |pts: &[StationaryPoint], t: f64| pts.iter().find(|p| (p.theta - t).abs() < 1e-9).map(|p| p.kind);
        assert_eq!(kind(&pts, FRAC_PI_2), Some(StationaryKind::LocalMin));
        assert_eq!(kind(&pts, 0.0), Some(StationaryKind::LocalMax));
        assert_eq!(kind(&pts, PI), Some(StationaryKind::LocalMax));

        let pts = stationary_angles(2.0, 1.0);
        let t2 = (2.0 * PI / (4.0 * K24)).asin();
        assert_abs_diff_eq!(t2, 0.789054, epsilon = 1e-6);
        assert_eq!(kind(&pts, t2), Some(StationaryKind::LocalMax));
        assert_eq!(kind(&pts, PI - t2), Some(StationaryKind::LocalMax));
        assert_eq!(kind(&pts, FRAC_PI_2), Some(StationaryKind::LocalMin));
        assert_eq!(kind(&pts, 0.0), Some(StationaryKind::BoundaryMin));

        let pts = stationary_angles(3.0, 1.0);
        assert!(pts.iter().all(|p| !(p.kind == StationaryKind::LocalMin)));
        assert_eq!(pts.len(), 3);
    }

    #[test]
    fn sweep_examples() {
        let down = hysteresis_sweep(3.0, 0.0, 300, 1.0, Branch::DP).unwrap();
        assert_eq!(down.records.len(), 301);
        for r in &down.records[..300] {
            assert_eq!(r.theta_d, 0.0, "beta {}", r.beta);
        }
        let last = down.records.last().unwrap();
        assert_eq!(last.beta, 0.0);
        assert_abs_diff_eq!(last.theta_d, FRAC_PI_2, epsilon = 1e-9);
        assert!(last.jumped);

        let up = hysteresis_sweep(0.0, 3.5, 350, 1.0, Branch::SR).unwrap();
        let jump = up.jumps().next().unwrap();
        assert!((jump.beta - critical_betas(1.0).1).abs() <= 0.01 + 1e-12, "{}", jump.beta);
        assert_eq!(jump.branch, Branch::DP);
        assert_eq!(up.jumps().count(), 1);

        let flat = hysteresis_sweep(1.0, 1.0, 2, 1.0, Branch::SR).unwrap();
        assert!(flat.records.iter().all(|r| r.theta_d == FRAC_PI_2 && r.beta == 1.0));
        assert!(hysteresis_sweep(1.0, 2.0, 10, 1.0, Branch::Other).is_err());
        assert!("xx".parse::<Branch>().is_err());
    }

    #[test]
    fn single_interface_wins() {
        for &b in &[0.0, 0.5, 1.409, 2.0, 2.818, 4.0] {
            let one = best_band_set(1, b, 1.0, 1).unwrap();
            let zero = best_band_set(0, b, 1.0, 1).unwrap();
            let two = best_band_set(2, b, 1.0, 1).unwrap();
            assert!(two.energy >= one.energy.min(zero.energy) - 1e-12);
        }
    }
}
