//! Defect detection on relaxed or constructed fields and comparison with the
//! limit model.

use std::collections::VecDeque;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_8, PI};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::energy::{assemble_energy_unchecked, EnergyBreakdown, Field2D};
use crate::error::{Error, Result};
use crate::limit::limit_energy;
use crate::potentials::ModelParams;

pub const DEFAULT_PHI_THRESHOLD: f64 = 0.3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Configuration {
    DP,
    SR,
    #[serde(rename = "mixed")]
    Mixed,
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Configuration::DP => "DP",
            Configuration::SR => "SR",
            Configuration::Mixed => "mixed",
        })
    }
}

/// One connected cluster of nodes with `φ` below the threshold.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Defect {
    /// Centroid weighted by `threshold − φ`.
    pub r: f64,
    pub theta: f64,
    pub min_phi: f64,
    /// `λ1 − λ2` at the node of smallest `φ`.
    pub eigen_gap: f64,
    pub nodes: usize,
    pub touches_axis: bool,
}

impl Defect {
    pub fn is_axial(&self) -> bool {
        self.touches_axis || self.theta < FRAC_PI_8 || self.theta > PI - FRAC_PI_8
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DefectReport {
    pub threshold: f64,
    pub defects: Vec<Defect>,
    pub ring_angle: Option<f64>,
    pub classification: Configuration,
    pub energy: EnergyBreakdown,
}

impl DefectReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Clusters of low biaxiality, found by 4-neighbour flood fill on the grid.
pub fn detect_defects(field: &Field2D, phi_threshold: f64) -> Result<DefectReport> {
    if !(phi_threshold > 0.0 && phi_threshold < 1.0) {
        return Err(Error::InvalidInput(format!(
            "phi threshold must lie in (0, 1), got {phi_threshold}"
        )));
    }
    let mesh = &field.mesh;
    let (nr, nt) = (mesh.n_r(), mesh.n_theta());
    let phi = field.biaxiality();
    let mut seen = vec![false; mesh.len()];
    let mut defects = Vec::new();
    let mut queue = VecDeque::new();
    for start in 0..mesh.len() {
        if seen[start] || phi[start] >= phi_threshold {
            continue;
        }
        seen[start] = true;
        queue.push_back(start);
        let (mut wsum, mut rsum, mut tsum) = (0.0, 0.0, 0.0);
        let mut best = start;
        let mut count = 0;
        let mut touches_axis = false;
        while let Some(n) = queue.pop_front() {
            count += 1;
            let (i, j) = mesh.coords(n);
            touches_axis |= j == 0 || j + 1 == nt;
            let w = (phi_threshold - phi[n]).max(f64::MIN_POSITIVE);
            wsum += w;
            rsum += w * mesh.r[i];
            tsum += w * mesh.theta[j];
            if phi[n] < phi[best] {
                best = n;
            }
            let mut visit = |m: usize| {
                if !seen[m] && phi[m] < phi_threshold {
                    seen[m] = true;
                    queue.push_back(m);
                }
            };
            if i > 0 {
                visit(n - nt);
            }
            if i + 1 < nr {
                visit(n + nt);
            }
            if j > 0 {
                visit(n - 1);
            }
            if j + 1 < nt {
                visit(n + 1);
            }
        }
        let lambda = field.values[best].spectral().lambda;
        defects.push(Defect {
            r: rsum / wsum,
            theta: tsum / wsum,
            min_phi: phi[best],
            eigen_gap: lambda[0] - lambda[1],
            nodes: count,
            touches_axis,
        });
    }
    let classification = classify_defects(&defects);
    let ring_angle = match classification {
        Configuration::SR => defects.iter().find(|d| !d.is_axial()).map(|d| d.theta),
        _ => None,
    };
    Ok(DefectReport {
        threshold: phi_threshold,
        defects,
        ring_angle,
        classification,
        energy: assemble_energy_unchecked(field),
    })
}

fn classify_defects(defects: &[Defect]) -> Configuration {
    let (axial, interior): (Vec<&Defect>, Vec<&Defect>) = defects.iter().partition(|d| d.is_axial());
    if interior.is_empty() {
        Configuration::DP
    } else if axial.is_empty() && interior.len() == 1 && (interior[0].theta - FRAC_PI_2).abs() < FRAC_PI_4 {
        Configuration::SR
    } else {
        Configuration::Mixed
    }
}

/// SR for a single equatorial ring and nothing on the axis, DP when every
/// cluster sits on the axis (or there are none), mixed otherwise.
pub fn classify_configuration(report: &DefectReport) -> Configuration {
    classify_defects(&report.defects)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRecord {
    pub classification: Configuration,
    pub theta_d: f64,
    /// `η · E` of the discrete field.
    pub scaled_energy: f64,
    pub limit_energy: f64,
    /// `(η E − E0) / E0`.
    pub relative_gap: f64,
}

pub fn compare_to_limit(report: &DefectReport, params: &ModelParams) -> Result<ComparisonRecord> {
    let theta_d = match report.classification {
        Configuration::DP => 0.0,
        Configuration::SR => report
            .ring_angle
            .ok_or_else(|| Error::InvalidInput("SR report without a ring angle".into()))?,
        Configuration::Mixed => {
            return Err(Error::InvalidInput(
                "a mixed configuration has no single interface angle".into(),
            ))
        }
    };
    let scaled = params.eta * report.energy.total;
    let e0 = limit_energy(theta_d, params.beta, params.s_star);
    Ok(ComparisonRecord {
        classification: report.classification,
        theta_d,
        scaled_energy: scaled,
        limit_energy: e0,
        relative_gap: (scaled - e0) / e0,
    })
}

/// `r,theta,phi` rows for every node.
pub fn phi_csv(field: &Field2D) -> String {
    let phi = field.biaxiality();
    let mut out = String::from("r,theta,phi\n");
    for (n, p) in phi.iter().enumerate() {
        let (i, j) = field.mesh.coords(n);
        out.push_str(&format!("{:.12},{:.12},{:.12}\n", field.mesh.r[i], field.mesh.theta[j], p));
    }
    out
}
