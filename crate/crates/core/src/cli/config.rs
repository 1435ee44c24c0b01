use std::fs;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::builtins::Builtin;
use crate::approx::FamilySpec;
use crate::error::{Error, Result};
use crate::funcrep::{EuclideanSamples, FunctionData, GridBox, PeriodicSamples, TaylorFunction, TorusSamples};
use crate::spaces::{SpaceDescriptor, SpaceParams};

/// How the input function is given.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FunctionSpec {
    /// Samples as `[re, im]` pairs: circle samples by default, an `N × N`
    /// torus grid with `shape`, real samples on a box with `domain`.
    Samples {
        values: Vec<[f64; 2]>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        shape: Option<Vec<usize>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        domain: Option<GridBox>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        alpha: Option<f64>,
    },
    /// Taylor coefficients `a_0, a_1, ...`; a polynomial unless `truncated`.
    Taylor {
        coeffs: Vec<[f64; 2]>,
        #[serde(default)]
        truncated: bool,
    },
    Builtin(Builtin),
    /// Another JSON file holding a function spec, relative to the config.
    File {
        path: PathBuf,
    },
}

fn complex(v: &[[f64; 2]]) -> Vec<Complex64> {
    v.iter().map(|&[re, im]| Complex64::new(re, im)).collect()
}

impl FunctionSpec {
    pub fn load(&self, space: &SpaceDescriptor, base: &Path) -> Result<FunctionData> {
        match self {
            FunctionSpec::File { path } => {
                let full = base.join(path);
                let text = fs::read_to_string(&full)
                    .map_err(|e| Error::Config(format!("cannot read {}: {e}", full.display())))?;
                let inner: FunctionSpec = serde_json::from_str(&text)?;
                if matches!(inner, FunctionSpec::File { .. }) {
                    return Err(Error::Config("function files may not refer to other files".into()));
                }
                inner.load(space, full.parent().unwrap_or(base))
            }
            FunctionSpec::Builtin(b) => b.build(space),
            FunctionSpec::Taylor { coeffs, truncated } => {
                let c = complex(coeffs);
                Ok(FunctionData::Taylor(if *truncated {
                    TaylorFunction::truncated(c)
                } else {
                    TaylorFunction::polynomial(c)
                }))
            }
            FunctionSpec::Samples {
                values,
                shape,
                domain,
                alpha,
            } => {
                if let Some(grid) = domain {
                    let space_alpha = match space.params {
                        SpaceParams::Lip { alpha } => Some(alpha),
                        _ => None,
                    };
                    let alpha = alpha.or(space_alpha).unwrap_or(1.0);
                    if values.iter().any(|v| v[1] != 0.0) {
                        return Err(Error::Config("Hölder samples must be real".into()));
                    }
                    let real = values.iter().map(|v| v[0]).collect();
                    return Ok(FunctionData::Euclidean(EuclideanSamples::new(
                        grid.clone(),
                        real,
                        alpha,
                    )?));
                }
                match shape.as_deref() {
                    None | Some([_]) => Ok(FunctionData::Periodic(PeriodicSamples::new(complex(values))?)),
                    Some(&[a, b]) if a == b => Ok(FunctionData::Torus(TorusSamples::new(a, complex(values))?)),
                    Some(s) => Err(Error::Config(format!("unsupported sample shape {s:?}"))),
                }
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Task {
    Norm,
    Distance,
    AssumptionCheck,
    InvarianceCheck,
}

/// The automorphism `φ_{a,λ}` of an invariance check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InvarianceSpec {
    pub a: [f64; 2],
    #[serde(default = "unit")]
    pub lambda: [f64; 2],
    #[serde(default = "two_percent")]
    pub tolerance: f64,
}

fn unit() -> [f64; 2] {
    [1.0, 0.0]
}

fn two_percent() -> f64 {
    0.02
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OutputSpec {
    #[serde(default = "default_report")]
    pub report: PathBuf,
    #[serde(default = "default_profile")]
    pub profile: PathBuf,
}

fn default_report() -> PathBuf {
    PathBuf::from("report.json")
}

fn default_profile() -> PathBuf {
    PathBuf::from("profile.csv")
}

impl Default for OutputSpec {
    fn default() -> Self {
        Self {
            report: default_report(),
            profile: default_profile(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub space: SpaceDescriptor,
    pub function: FunctionSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub task: Option<Task>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<FamilySpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub invariance: Option<InvarianceSpec>,
    #[serde(default)]
    pub output: OutputSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub slack: Option<f64>,
}

impl RunConfig {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text =
            fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        let cfg: RunConfig =
            serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        cfg.space.validate().map_err(|e| Error::Config(e.to_string()))?;
        Ok(cfg)
    }

    pub fn slack(&self) -> f64 {
        self.slack.unwrap_or(1e-3)
    }
}
