use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::funcrep::{EuclideanSamples, FunctionData, GridBox, PeriodicSamples, TaylorFunction, TorusSamples};
use crate::spaces::{SpaceDescriptor, SpaceParams};

/// Named test functions. Unset sizes follow the space's resolution.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case", deny_unknown_fields)]
pub enum Builtin {
    /// `f(z) = z`.
    Z,
    Monomial {
        degree: usize,
    },
    /// `log 1/(1 − z)`.
    LogSingular {
        terms: Option<usize>,
    },
    /// `1/(1 − z)`.
    CauchyKernel {
        terms: Option<usize>,
    },
    /// `Σ_{k≤levels} z^{2^k}`.
    Lacunary {
        levels: Option<u32>,
    },
    /// Indicator of the upper half circle `[0, π)`.
    StepHalf {
        n: Option<usize>,
    },
    Cosine {
        n: Option<usize>,
        mode: Option<u32>,
    },
    /// Upper-half indicator in both variables.
    StepProduct {
        n: Option<usize>,
    },
    /// Upper-half indicator in the first variable only.
    OneVariable {
        n: Option<usize>,
    },
    /// `|x|^alpha`.
    HolderCusp {
        alpha: Option<f64>,
        nodes: Option<usize>,
        lower: Option<f64>,
        upper: Option<f64>,
    },
}

const DEFAULT_TERMS: usize = 256;

fn upper_half(t: f64) -> f64 {
    if t < PI {
        1.0
    } else {
        0.0
    }
}

impl Builtin {
    pub fn build(&self, space: &SpaceDescriptor) -> Result<FunctionData> {
        let n = |n: &Option<usize>| n.unwrap_or_else(|| space.samples());
        Ok(match self {
            Builtin::Z => FunctionData::Taylor(TaylorFunction::monomial(1, Complex64::new(1.0, 0.0))),
            Builtin::Monomial { degree } => {
                FunctionData::Taylor(TaylorFunction::monomial(*degree, Complex64::new(1.0, 0.0)))
            }
            Builtin::LogSingular { terms } => {
                FunctionData::Taylor(TaylorFunction::log_singular(terms.unwrap_or(DEFAULT_TERMS)))
            }
            Builtin::CauchyKernel { terms } => {
                FunctionData::Taylor(TaylorFunction::cauchy_kernel(terms.unwrap_or(DEFAULT_TERMS)))
            }
            Builtin::Lacunary { levels } => FunctionData::Taylor(TaylorFunction::lacunary(levels.unwrap_or(6))),
            Builtin::StepHalf { n: size } => {
                FunctionData::Periodic(PeriodicSamples::from_real_fn(n(size), upper_half)?)
            }
            Builtin::Cosine { n: size, mode } => {
                let m = mode.unwrap_or(1) as f64;
                FunctionData::Periodic(PeriodicSamples::from_real_fn(n(size), |t| (m * t).cos())?)
            }
            Builtin::StepProduct { n: size } => FunctionData::Torus(TorusSamples::from_fn(n(size), |s, t| {
                Complex64::new(upper_half(s) * upper_half(t), 0.0)
            })?),
            Builtin::OneVariable { n: size } => FunctionData::Torus(TorusSamples::from_fn(n(size), |s, _| {
                Complex64::new(upper_half(s), 0.0)
            })?),
            Builtin::HolderCusp {
                alpha,
                nodes,
                lower,
                upper,
            } => {
                let space_alpha = match space.params {
                    SpaceParams::Lip { alpha } => Some(alpha),
                    _ => None,
                };
                let alpha = alpha.or(space_alpha).unwrap_or(0.5);
                let grid = match (&space.resolution.grid, nodes, lower, upper) {
                    (Some(g), None, None, None) => g.clone(),
                    _ => GridBox::interval(lower.unwrap_or(-1.0), upper.unwrap_or(1.0), nodes.unwrap_or(1025))?,
                };
                let f = |x: &[f64]| x.iter().map(|c| c * c).sum::<f64>().sqrt().powf(alpha);
                FunctionData::Euclidean(EuclideanSamples::from_fn(grid, alpha, f)?)
            }
        })
    }
}
