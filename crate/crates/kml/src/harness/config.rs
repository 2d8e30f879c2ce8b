//! JSON run configuration shared by every subcommand.

use crate::energy::PotentialSpec;
use crate::error::{Error, Result};
use crate::flow::{FlowConfig, Init};
use crate::grid::{Geometry, Grid};
use crate::theory::ProblemParams;
use crate::util::geomspace;
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};
use std::sync::Arc;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ParamsCfg {
    #[serde(default = "one")]
    pub a: f64,
    #[serde(default = "one")]
    pub b: f64,
    pub p: f64,
    #[serde(rename = "N")]
    pub dim: usize,
}

fn one() -> f64 {
    1.0
}

/// Mass specification: a scalar, an explicit list, or a geometric sweep
/// `{ "geom": [start, stop, count] }`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CSpec {
    Scalar(f64),
    List(Vec<f64>),
    Geom { geom: (f64, f64, usize) },
}

impl Default for CSpec {
    fn default() -> Self {
        CSpec::Scalar(1.0)
    }
}

impl CSpec {
    pub fn expand(&self) -> Result<Vec<f64>> {
        let out = match self {
            CSpec::Scalar(c) => vec![*c],
            CSpec::List(v) => v.clone(),
            CSpec::Geom { geom: (start, stop, count) } => {
                if !(*start > 0.0 && *stop > 0.0 && *count >= 2) {
                    return Err(Error::Config(format!(
                        "geometric sweep needs positive endpoints and count >= 2, got {start}:{stop}:{count}"
                    )));
                }
                geomspace(*start, *stop, *count)
            }
        };
        if out.is_empty() || out.iter().any(|c| !(*c > 0.0)) {
            return Err(Error::Config("masses must be positive".into()));
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PotentialCfg {
    #[serde(default = "default_kind")]
    pub kind: String,
    pub omega: Option<f64>,
    pub s: Option<f64>,
    pub kappa: Option<f64>,
    pub path: Option<PathBuf>,
}

fn default_kind() -> String {
    "zero".into()
}

impl Default for PotentialCfg {
    fn default() -> Self {
        PotentialCfg { kind: "zero".into(), omega: None, s: None, kappa: None, path: None }
    }
}

impl PotentialCfg {
    pub fn to_spec(&self) -> Result<PotentialSpec> {
        match self.kind.as_str() {
            "zero" => Ok(PotentialSpec::Zero),
            "harmonic" => Ok(PotentialSpec::Harmonic { omega: self.omega.unwrap_or(1.0) }),
            "power" => Ok(PotentialSpec::Power {
                s: self.s.ok_or_else(|| Error::Config("power potential needs `s`".into()))?,
                kappa: self.kappa.unwrap_or(1.0),
            }),
            "tabulated" => Ok(PotentialSpec::Tabulated {
                path: self
                    .path
                    .clone()
                    .ok_or_else(|| Error::Config("tabulated potential needs `path`".into()))?,
            }),
            other => Err(Error::Config(format!("unknown potential kind `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GridCfg {
    pub geometry: String,
    pub extent: f64,
    pub n: usize,
}

impl GridCfg {
    pub fn build(&self, dim: usize) -> Result<Arc<Grid>> {
        Grid::new(dim, Geometry::parse(&self.geometry)?, self.extent, self.n)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FlowCfg {
    #[serde(default = "default_step0")]
    pub step0: f64,
    #[serde(default = "default_shrink")]
    pub shrink: f64,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default = "default_max_iter")]
    pub max_iter: usize,
    #[serde(default = "default_init")]
    pub init: String,
    #[serde(default = "one")]
    pub init_width: f64,
    #[serde(default)]
    pub allow_outside_existence: bool,
}

fn default_step0() -> f64 {
    0.5
}
fn default_shrink() -> f64 {
    0.5
}
fn default_tol() -> f64 {
    1e-8
}
fn default_max_iter() -> usize {
    200_000
}
fn default_init() -> String {
    "gaussian".into()
}

impl Default for FlowCfg {
    fn default() -> Self {
        FlowCfg {
            step0: default_step0(),
            shrink: default_shrink(),
            tol: default_tol(),
            max_iter: default_max_iter(),
            init: default_init(),
            init_width: 1.0,
            allow_outside_existence: false,
        }
    }
}

impl FlowCfg {
    pub fn build(&self) -> Result<FlowConfig> {
        let init = match self.init.as_str() {
            "gaussian" => Init::Gaussian { width: self.init_width },
            "theory_profile" => Init::TheoryProfile,
            other => return Err(Error::Config(format!("unknown flow init `{other}`"))),
        };
        Ok(FlowConfig {
            step0: self.step0,
            shrink: self.shrink,
            tol: self.tol,
            max_iter: self.max_iter,
            init,
            allow_outside_existence: self.allow_outside_existence,
        })
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunConfig {
    #[serde(default)]
    pub experiment: Option<String>,
    pub params: ParamsCfg,
    #[serde(default)]
    pub c: CSpec,
    #[serde(default)]
    pub potential: PotentialCfg,
    #[serde(default)]
    pub grid: Option<GridCfg>,
    #[serde(default)]
    pub flow: FlowCfg,
    #[serde(default)]
    pub output: Option<PathBuf>,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default)]
    pub cache_dir: Option<PathBuf>,
    /// blow-up probe: dilation factors (default powers of two up to 256)
    #[serde(default)]
    pub t_grid: Option<Vec<f64>>,
    /// blow-up probe: energy floor the curve must reach (default -1e6)
    #[serde(default)]
    pub floor: Option<f64>,
    /// fuzz-style experiments: number of random fields per case
    #[serde(default)]
    pub count: Option<usize>,
}

fn default_seed() -> u64 {
    42
}

impl RunConfig {
    pub fn from_file(path: &Path) -> Result<RunConfig> {
        let text = std::fs::read_to_string(path)?;
        serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    pub fn problem_params(&self, c: f64, qp_mass: f64) -> Result<ProblemParams> {
        ProblemParams::new(self.params.a, self.params.b, self.params.p, self.params.dim, c, qp_mass)
    }

    /// The grid for flow experiments; when absent, a line/radial grid is
    /// sized from the masses involved so the minimizer fits with room.
    pub fn flow_grid(&self, default_extent: f64, default_n: usize) -> Result<Arc<Grid>> {
        match &self.grid {
            Some(g) => g.build(self.params.dim),
            None => {
                let geometry = if self.params.dim == 1 { Geometry::Line } else { Geometry::Radial };
                Grid::new(self.params.dim, geometry, default_extent, default_n)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_full_config() {
        let text = r#"{
            "experiment": "concentrate",
            "params": {"a": 1.0, "b": 1.0, "p": 3.0, "N": 1},
            "c": {"geom": [2.0, 50.0, 5]},
            "potential": {"kind": "harmonic", "omega": 0.01},
            "grid": {"geometry": "line", "extent": 80.0, "n": 3201},
            "flow": {"tol": 1e-6, "max_iter": 100000, "init": "theory_profile"},
            "output": "out/conc",
            "seed": 7
        }"#;
        let cfg: RunConfig = serde_json::from_str(text).unwrap();
        assert_eq!(cfg.experiment.as_deref(), Some("concentrate"));
        let cs = cfg.c.expand().unwrap();
        assert_eq!(cs.len(), 5);
        assert!((cs[0] - 2.0).abs() < 1e-12 && (cs[4] - 50.0).abs() < 1e-12);
        assert_eq!(cfg.seed, 7);
        let spec = cfg.potential.to_spec().unwrap();
        assert_eq!(spec.kind(), "harmonic");
        cfg.flow.build().unwrap();
        cfg.grid.as_ref().unwrap().build(1).unwrap();
    }

    #[test]
    fn c_spec_forms() {
        let scalar: CSpec = serde_json::from_str("2.5").unwrap();
        assert_eq!(scalar.expand().unwrap(), vec![2.5]);
        let list: CSpec = serde_json::from_str("[1, 2, 5]").unwrap();
        assert_eq!(list.expand().unwrap(), vec![1.0, 2.0, 5.0]);
        let geom: CSpec = serde_json::from_str(r#"{"geom": [1, 64, 7]}"#).unwrap();
        let v = geom.expand().unwrap();
        assert_eq!(v.len(), 7);
        assert!((v[6] - 64.0).abs() < 1e-12);
        let bad: CSpec = serde_json::from_str(r#"{"geom": [0, 64, 7]}"#).unwrap();
        assert!(bad.expand().is_err());
    }
}
