//! Field checkpoints: a CSV of node values plus a JSON sidecar with the mesh,
//! parameters, and optional energy and solver report.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{build_mesh, ConvergenceReport, EnergyBreakdown, Field2D, MeshSpec};
use crate::error::{Error, Result};
use crate::potentials::ModelParams;
use crate::qtensor::QTensor;

pub const CSV_HEADER: &str = "i,j,r,theta,q1,q2,q3,q4,q5";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckpointMeta {
    pub mesh: MeshSpec,
    pub params: ModelParams,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub energy: Option<EnergyBreakdown>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<ConvergenceReport>,
}

/// `dir/field.csv` → `dir/field.meta.json`.
pub fn sidecar_path(csv: &Path) -> PathBuf {
    let stem = csv
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "field".into());
    csv.with_file_name(format!("{stem}.meta.json"))
}

/// Serializes node values with 17 significant digits.
pub fn field_to_csv(field: &Field2D) -> String {
    let mesh = &field.mesh;
    let mut out = String::with_capacity(mesh.len() * 200);
    out.push_str(CSV_HEADER);
    out.push('\n');
    for (n, q) in field.values.iter().enumerate() {
        let (i, j) = mesh.coords(n);
        let _ = write!(out, "{i},{j},{:.16e},{:.16e}", mesh.r[i], mesh.theta[j]);
        for c in q.coords {
            let _ = write!(out, ",{c:.16e}");
        }
        out.push('\n');
    }
    out
}

pub fn write_checkpoint(field: &Field2D, csv: &Path, meta: &CheckpointMeta) -> Result<()> {
    fs::write(csv, field_to_csv(field)).map_err(|e| Error::io(format!("writing {}", csv.display()), e))?;
    let side = sidecar_path(csv);
    let json = serde_json::to_string_pretty(meta)?;
    fs::write(&side, json + "\n").map_err(|e| Error::io(format!("writing {}", side.display()), e))
}

/// Metadata for a field without energy or report.
pub fn meta_for(field: &Field2D) -> CheckpointMeta {
    CheckpointMeta {
        mesh: field.mesh.spec,
        params: field.params,
        energy: None,
        report: None,
    }
}

pub fn read_checkpoint(csv: &Path) -> Result<(Field2D, CheckpointMeta)> {
    let side = sidecar_path(csv);
    let meta_text =
        fs::read_to_string(&side).map_err(|e| Error::io(format!("reading {}", side.display()), e))?;
    let meta: CheckpointMeta = serde_json::from_str(&meta_text)?;
    let text = fs::read_to_string(csv).map_err(|e| Error::io(format!("reading {}", csv.display()), e))?;
    let bad = |reason: String| Error::Checkpoint {
        path: csv.to_path_buf(),
        reason,
    };
    let mesh = Arc::new(build_mesh(meta.mesh)?);
    let mut lines = text.lines();
    if lines.next() != Some(CSV_HEADER) {
        return Err(bad(format!("expected header `{CSV_HEADER}`")));
    }
    let mut values = vec![QTensor::ZERO; mesh.len()];
    let mut seen = vec![false; mesh.len()];
    for (row, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split(',').collect();
        if cols.len() != 9 {
            return Err(bad(format!("line {}: expected 9 columns, got {}", row + 2, cols.len())));
        }
        let idx = |k: usize| -> Result<usize> {
            cols[k]
                .parse()
                .map_err(|_| bad(format!("line {}: bad index `{}`", row + 2, cols[k])))
        };
        let num = |k: usize| -> Result<f64> {
            cols[k]
                .parse()
                .map_err(|_| bad(format!("line {}: bad number `{}`", row + 2, cols[k])))
        };
        let (i, j) = (idx(0)?, idx(1)?);
        if i >= mesh.n_r() || j >= mesh.n_theta() {
            return Err(bad(format!("line {}: node ({i}, {j}) outside the mesh", row + 2)));
        }
        let (r, theta) = (num(2)?, num(3)?);
        if (r - mesh.r[i]).abs() > 1e-12 * r.abs().max(1.0) || (theta - mesh.theta[j]).abs() > 1e-12 {
            return Err(bad(format!("line {}: coordinates disagree with the mesh", row + 2)));
        }
        let n = mesh.index(i, j);
        values[n] = QTensor::new([num(4)?, num(5)?, num(6)?, num(7)?, num(8)?]);
        seen[n] = true;
    }
    if let Some(n) = seen.iter().position(|s| !s) {
        let (i, j) = mesh.coords(n);
        return Err(bad(format!("node ({i}, {j}) missing")));
    }
    let field = Field2D {
        mesh,
        params: meta.params,
        values,
    };
    Ok((field, meta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::energy::MeshSpec;

    #[test]
    fn write_read_write_is_byte_identical() {
        let dir = tempfile::tempdir().unwrap();
        let mesh = Arc::new(
            build_mesh(MeshSpec {
                r_max: 3.0,
                n_r: 10,
                n_theta: 9,
                stretch: 1.1,
            })
            .unwrap(),
        );
        let p = ModelParams::unit_material(0.5, 0.2).unwrap();
        let f = Field2D::from_fn(mesh, p, |r, t| QTensor::meridional(t / r, 1.5 / r.sqrt()));
        let a = dir.path().join("a.csv");
        let b = dir.path().join("b.csv");
        write_checkpoint(&f, &a, &meta_for(&f)).unwrap();
        let (g, meta) = read_checkpoint(&a).unwrap();
        assert_eq!(g.values, f.values);
        write_checkpoint(&g, &b, &meta).unwrap();
        assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
        assert_eq!(
            fs::read(sidecar_path(&a)).unwrap(),
            fs::read(sidecar_path(&b)).unwrap()
        );
        assert!(sidecar_path(&a).ends_with("a.meta.json"));
    }

    #[test]
    fn malformed_files_are_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let mesh = Arc::new(build_mesh(MeshSpec { r_max: 2.0, n_r: 8, n_theta: 8, stretch: 1.0 }).unwrap());
        let p = ModelParams::unit_material(0.5, 0.2).unwrap();
        let f = Field2D::preferred(mesh, p);
        let a = dir.path().join("a.csv");
        write_checkpoint(&f, &a, &meta_for(&f)).unwrap();
        let text = fs::read_to_string(&a).unwrap();
        let truncated: String = text.lines().take(20).map(|l| format!("{l}\n")).collect();
        fs::write(&a, truncated).unwrap();
        assert!(matches!(read_checkpoint(&a), Err(Error::Checkpoint { .. })));
        fs::write(&a, text.replace("i,j", "x,y")).unwrap();
        assert!(matches!(read_checkpoint(&a), Err(Error::Checkpoint { .. })));
    }
}
