//! Run configuration for relaxation experiments, read from TOML.

use std::f64::consts::FRAC_PI_2;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::energy::{MeshSpec, SolverOpts};
use crate::error::{Error, Result};
use crate::potentials::ModelParams;
use crate::seed::Orientation;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Material {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl Default for Material {
    fn default() -> Self {
        Material { a: 1.0, b: 1.0, c: 1.0 }
    }
}

/// Exactly two of the three are given.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Regime {
    pub beta: Option<f64>,
    pub eta: Option<f64>,
    pub xi: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SeedKind {
    Dipole,
    Saturn,
    Interface,
    File,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeedConfig {
    #[serde(rename = "type")]
    pub kind: SeedKind,
    /// Interface angle for `interface` seeds.
    pub theta_d: Option<f64>,
    /// Checkpoint to start from for `file` seeds.
    pub path: Option<PathBuf>,
    /// Core ramp width relative to the core radius; defaults to `min(ξ/η, 0.25)`.
    pub epsilon: Option<f64>,
    #[serde(default)]
    pub orientation: Orientation,
}

impl Default for SeedConfig {
    fn default() -> Self {
        SeedConfig {
            kind: SeedKind::Saturn,
            theta_d: None,
            path: None,
            epsilon: None,
            orientation: Orientation::Up,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub directory: PathBuf,
    #[serde(default = "default_formats")]
    pub formats: Vec<Format>,
}

fn default_formats() -> Vec<Format> {
    vec![Format::Csv, Format::Json]
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig {
            directory: PathBuf::from("out"),
            formats: default_formats(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub material: Material,
    pub regime: Regime,
    #[serde(default)]
    pub mesh: MeshSpec,
    #[serde(default)]
    pub seed: SeedConfig,
    #[serde(default)]
    pub solver: SolverOpts,
    #[serde(default)]
    pub output: OutputConfig,
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path.display().to_string(), e))?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn params(&self) -> Result<ModelParams> {
        let m = self.material;
        let r = self.regime;
        ModelParams::new(m.a, m.b, m.c, r.beta, r.eta, r.xi).map_err(|e| Error::Config(e.to_string()))
    }

    /// Interface angle of a constructed seed.
    pub fn theta_d(&self) -> Result<Option<f64>> {
        match self.seed.kind {
            SeedKind::Dipole => Ok(Some(0.0)),
            SeedKind::Saturn => Ok(Some(FRAC_PI_2)),
            SeedKind::Interface => match self.seed.theta_d {
                Some(t) => Ok(Some(t)),
                None => Err(Error::Config("interface seeds need seed.theta_d".into())),
            },
            SeedKind::File => Ok(None),
        }
    }

    pub fn epsilon(&self, p: &ModelParams) -> f64 {
        self.seed.epsilon.unwrap_or((p.xi / p.eta).min(0.25))
    }

    pub fn validate(&self) -> Result<()> {
        let given = [self.regime.beta, self.regime.eta, self.regime.xi]
            .iter()
            .filter(|v| v.is_some())
            .count();
        if given != 2 {
            return Err(Error::Config(format!(
                "exactly two of regime.beta, regime.eta, regime.xi must be set, found {given}"
            )));
        }
        self.params()?;
        self.mesh.validate().map_err(|e| Error::Config(e.to_string()))?;
        self.theta_d()?;
        if self.seed.kind == SeedKind::File && self.seed.path.is_none() {
            return Err(Error::Config("file seeds need seed.path".into()));
        }
        if self.seed.kind != SeedKind::Interface && self.seed.theta_d.is_some() {
            return Err(Error::Config("seed.theta_d only applies to interface seeds".into()));
        }
        if !(self.solver.tol > 0.0) || self.solver.max_iter == 0 {
            return Err(Error::Config("solver.tol must be positive and solver.max_iter nonzero".into()));
        }
        Ok(())
    }
}
