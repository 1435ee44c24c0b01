//! Approximation families whose members lie in the little space: Poisson
//! smoothing on the circle and torus, dilation and Fejér means of Taylor
//! series, and extension plus Poisson mollification for Hölder samples.
//! The assumption checker measures how the members behave against the input.

mod smooth;

use std::fmt::Write as _;

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::family::{limsup_estimate, OperatorParam};
use crate::funcrep::{x_norm, FunctionData, PeriodicSamples, TaylorFunction, TorusSamples};
use crate::spaces::{build_family_for, SpaceDescriptor, SpaceTag};

pub use smooth::{lip_constant, lip_smooth, poisson_convolve_1d, SmoothOptions, Smoothed};

fn check_r(r: f64) -> Result<()> {
    if (0.0..1.0).contains(&r) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "Poisson radius must lie in [0, 1), got {r}"
        )))
    }
}

/// Multiplier `r^{|k|}` for DFT index `k` of an `n`-point grid; the Nyquist
/// mode gets `r^{n/2}`, which keeps the discrete kernel positive.
fn poisson_multipliers(n: usize, r: f64) -> Vec<f64> {
    (0..n).map(|k| r.powi(k.min(n - k) as i32)).collect()
}

/// `f * P_r` by the Fourier multiplier `r^{|k|}`.
pub fn poisson_circle(f: &PeriodicSamples, r: f64) -> Result<PeriodicSamples> {
    check_r(r)?;
    let n = f.len();
    let mut buf = f.values().to_vec();
    let mut planner = FftPlanner::new();
    planner.plan_fft_forward(n).process(&mut buf);
    for (v, m) in buf.iter_mut().zip(poisson_multipliers(n, r)) {
        *v *= m / n as f64;
    }
    planner.plan_fft_inverse(n).process(&mut buf);
    PeriodicSamples::new(buf)
}

/// `F * (P_r ⊗ P_r)` by the multiplier `r^{|j|+|k|}`.
pub fn poisson_torus2(f: &TorusSamples, r: f64) -> Result<TorusSamples> {
    check_r(r)?;
    let n = f.n();
    let mult = poisson_multipliers(n, r);
    let mut planner = FftPlanner::new();
    let (fwd, inv) = (planner.plan_fft_forward(n), planner.plan_fft_inverse(n));
    let mut rows = f.values().to_vec();
    rows.chunks_mut(n).for_each(|row| fwd.process(row));
    let mut cols = transpose(&rows, n);
    for (k, col) in cols.chunks_mut(n).enumerate() {
        fwd.process(col);
        for (j, v) in col.iter_mut().enumerate() {
            *v *= mult[j] * mult[k] / (n * n) as f64;
        }
        inv.process(col);
    }
    let mut rows = transpose(&cols, n);
    rows.chunks_mut(n).for_each(|row| inv.process(row));
    TorusSamples::new(n, rows)
}

fn transpose(values: &[Complex64], n: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); n * n];
    for j in 0..n {
        for k in 0..n {
            out[k * n + j] = values[j * n + k];
        }
    }
    out
}

/// `f_r(z) = f(rz)`.
pub fn dilate(f: &TaylorFunction, r: f64) -> Result<TaylorFunction> {
    f.dilate(r)
}

/// `Σ_{k≤n} (1 − k/(n+1)) a_k z^k`.
pub fn fejer_taylor(f: &TaylorFunction, n: usize) -> Result<TaylorFunction> {
    f.fejer(n)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ApproxKind {
    PoissonCircle,
    Dilation,
    Fejer,
    PoissonTorus,
    LipSmooth,
}

impl ApproxKind {
    pub fn name(self) -> &'static str {
        match self {
            ApproxKind::PoissonCircle => "poisson_circle",
            ApproxKind::Dilation => "dilation",
            ApproxKind::Fejer => "fejer",
            ApproxKind::PoissonTorus => "poisson_torus",
            ApproxKind::LipSmooth => "lip_smooth",
        }
    }

    /// The family's natural ladder orientation.
    fn parameter_name(self) -> &'static str {
        match self {
            ApproxKind::PoissonCircle | ApproxKind::Dilation | ApproxKind::PoissonTorus => "r",
            ApproxKind::Fejer => "n",
            ApproxKind::LipSmooth => "t",
        }
    }
}

/// Parameter ladders: `r_m = 1 − 2^{-m}`, `n_m = 2^m`, `t_m = t_0 2^{-m}`,
/// or explicit values.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Ladder {
    DyadicR {
        levels: usize,
        #[serde(default = "one_usize")]
        start: usize,
    },
    DyadicN {
        levels: usize,
        #[serde(default = "one_usize")]
        start: usize,
    },
    DyadicT {
        levels: usize,
        t0: f64,
    },
    Explicit {
        values: Vec<f64>,
    },
}

fn one_usize() -> usize {
    1
}

impl Ladder {
    pub fn values(&self) -> Vec<f64> {
        match *self {
            Ladder::DyadicR { levels, start } => {
                (start..start + levels).map(|m| 1.0 - 2f64.powi(-(m as i32))).collect()
            }
            Ladder::DyadicN { levels, start } => (start..start + levels).map(|m| 2f64.powi(m as i32)).collect(),
            Ladder::DyadicT { levels, t0 } => (0..levels).map(|m| t0 * 2f64.powi(-(m as i32))).collect(),
            Ladder::Explicit { ref values } => values.clone(),
        }
    }
}

/// Configuration block of an approximation family.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilySpec {
    pub kind: ApproxKind,
    pub ladder: Ladder,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub padding_factor: Option<f64>,
}

impl FamilySpec {
    pub fn new(kind: ApproxKind, ladder: Ladder) -> Self {
        Self {
            kind,
            ladder,
            padding_factor: None,
        }
    }
}

/// The generated members of a family, in ladder order.
#[derive(Clone, Debug)]
pub struct ApproxFamily {
    pub kind: ApproxKind,
    pub parameters: Vec<f64>,
    pub members: Vec<FunctionData>,
    /// Largest neglected kernel mass over the members (only `lip_smooth`).
    pub truncation_mass: f64,
}

impl ApproxFamily {
    pub fn generate(spec: &FamilySpec, f: &FunctionData) -> Result<Self> {
        let parameters = spec.ladder.values();
        if parameters.is_empty() {
            return Err(Error::Config("approximation ladder is empty".into()));
        }
        let mut members = Vec::with_capacity(parameters.len());
        let mut truncation_mass = 0.0f64;
        let mut smoothing = SmoothOptions::default();
        if let Some(pf) = spec.padding_factor {
            smoothing.padding_factor = pf;
        }
        if let (ApproxKind::LipSmooth, FunctionData::Euclidean(g)) = (spec.kind, f) {
            if g.alpha() < 1.0 {
                smoothing.lambda = Some(lip_constant(g));
            }
        }
        for &p in &parameters {
            let member = match (spec.kind, f) {
                (ApproxKind::PoissonCircle, FunctionData::Periodic(g)) => FunctionData::Periodic(poisson_circle(g, p)?),
                (ApproxKind::PoissonTorus, FunctionData::Torus(g)) => FunctionData::Torus(poisson_torus2(g, p)?),
                (ApproxKind::Dilation, FunctionData::Taylor(g)) => FunctionData::Taylor(dilate(g, p)?),
                (ApproxKind::Fejer, FunctionData::Taylor(g)) => {
                    if !(p >= 1.0 && p.fract() == 0.0) {
                        return Err(Error::InvalidParameter(format!(
                            "Fejér order must be a positive integer, got {p}"
                        )));
                    }
                    FunctionData::Taylor(fejer_taylor(g, p as usize)?)
                }
                (ApproxKind::LipSmooth, FunctionData::Euclidean(g)) => {
                    let s = lip_smooth(g, p, &smoothing)?;
                    truncation_mass = truncation_mass.max(s.truncation_mass);
                    FunctionData::Euclidean(s.samples)
                }
                (kind, other) => {
                    return Err(Error::Mismatch {
                        expected: match kind {
                            ApproxKind::PoissonCircle => "periodic samples",
                            ApproxKind::PoissonTorus => "torus samples",
                            ApproxKind::Dilation | ApproxKind::Fejer => "Taylor function",
                            ApproxKind::LipSmooth => "Euclidean samples",
                        },
                        found: other.kind(),
                    })
                }
            };
            members.push(member);
        }
        Ok(Self {
            kind: spec.kind,
            parameters,
            members,
            truncation_mass,
        })
    }

    /// Stable identifiers such as `dilation(r=0.75)`.
    pub fn ids(&self) -> Vec<String> {
        self.parameters
            .iter()
            .map(|p| {
                let mut s = String::new();
                let _ = write!(s, "{}({}={})", self.kind.name(), self.kind.parameter_name(), p);
                s
            })
            .collect()
    }
}

/// Outcome of checking the approximation assumption on one family.
#[derive(Clone, Debug, Serialize)]
pub struct AssumptionReport {
    pub family: ApproxKind,
    pub parameters: Vec<f64>,
    pub input_norm: f64,
    pub member_norms: Vec<f64>,
    pub x_norm_input: f64,
    pub x_distances: Vec<f64>,
    pub member_tails: Vec<Option<f64>>,
    pub members_little: Vec<bool>,
    pub verdict: Verdict,
    pub slack_used: f64,
    pub truncation_mass: f64,
    pub argmax_param: OperatorParam,
    pub notes: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
}

/// Relative X-distance the final member must reach.
pub const X_TOLERANCE: f64 = 1e-2;

/// A member counts as little when its tail estimate is below this.
pub fn little_threshold(norm: f64) -> f64 {
    (1e-2f64).max(0.05 * norm)
}

/// Measure member seminorms, X-distances and tails against the input.
pub fn assumption_check(
    space: &SpaceDescriptor,
    f: &FunctionData,
    family: &ApproxFamily,
    slack: f64,
) -> Result<AssumptionReport> {
    if !(slack >= 0.0) {
        return Err(Error::InvalidParameter("slack must be non-negative".into()));
    }
    let grid = build_family_for(space, f)?;
    let ambient = space.ambient_norm();
    let base = grid.report(&grid.evaluate(f)?);
    let scales = grid.default_scales();
    let threshold = little_threshold(base.value);
    let x_norm_input = x_norm(&ambient, f)?;

    let mut member_norms = Vec::new();
    let mut x_distances = Vec::new();
    let mut member_tails = Vec::new();
    let mut members_little = Vec::new();
    for g in &family.members {
        let values = grid.evaluate(g)?;
        member_norms.push(values.iter().copied().fold(0.0, f64::max));
        let tail = limsup_estimate(&grid.profile(&values, &scales)?, grid.allowance())
            .ok()
            .map(|e| e.estimate);
        members_little.push(tail.is_some_and(|t| t < threshold));
        member_tails.push(tail);
        x_distances.push(x_norm(&ambient, &f.sub(g)?)?);
    }

    let slack_used = slack + family.truncation_mass;
    let bounded = member_norms.iter().all(|&m| m <= base.value * (1.0 + slack_used));
    let last = *x_distances.last().unwrap_or(&0.0);
    let close = last <= X_TOLERANCE * x_norm_input;
    let tail_start = x_distances.len().saturating_sub(3);
    let settling = x_distances[tail_start..]
        .windows(2)
        .all(|w| w[1] <= w[0] * (1.0 + 1e-12) + 1e-15);
    let verdict = if bounded && close && settling {
        Verdict::Pass
    } else {
        Verdict::Fail
    };

    let mut notes = Vec::new();
    if space.tag() == SpaceTag::Lip {
        notes.push("X-distances are sup-norm distances on the sample grid".into());
    }
    if !bounded {
        notes.push("a member seminorm exceeds the input seminorm beyond slack".into());
    }
    if !close {
        notes.push(format!(
            "final X-distance {last:.3e} is not below {X_TOLERANCE} of the input X-norm {x_norm_input:.3e}"
        ));
    }
    if !settling {
        notes.push("X-distances increase over the last three members".into());
    }
    Ok(AssumptionReport {
        family: family.kind,
        parameters: family.parameters.clone(),
        input_norm: base.value,
        member_norms,
        x_norm_input,
        x_distances,
        member_tails,
        members_little,
        verdict,
        slack_used,
        truncation_mass: family.truncation_mass,
        argmax_param: base.argmax_param,
        notes,
    })
}
