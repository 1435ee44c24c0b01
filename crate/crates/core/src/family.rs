//! Discretized operator families `𝓛`: the seminorm `sup_𝓛 ‖Lf‖` over the
//! grid and the tail behaviour of `‖Lf‖` as operators escape to infinity.
//!
//! Every grid entry carries a remoteness `ρ > 0` with `ρ → 0` exactly when the
//! operator leaves every compact subset of the family. The tail profile
//! `S(t) = max{‖Lf‖ : ρ(L) ≤ t}` over a dyadic ladder of scales then
//! approximates the limsup at infinity from below.

use std::io::Write;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::funcrep::{Arc, FunctionData};
use crate::spaces::SpaceTag;

/// Relative slack when testing `ρ ≤ t`, so dyadic values computed along
/// different routes land on the same side of a scale.
const SCALE_TOL: f64 = 1e-9;

/// Parameter of one operator in a family, as reported back to callers.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OperatorParam {
    Arc { midpoint: f64, length: f64 },
    Point { re: f64, im: f64 },
    Automorphism { a_re: f64, a_im: f64 },
    Pair { x: Vec<f64>, y: Vec<f64> },
    Rectangle { first: Arc, second: Arc },
    Index { index: usize },
}

/// A concrete discretized family: knows its entries and how to compute
/// `‖Lf‖_Y` for all of them at once.
pub trait FamilyEvaluator: Send + Sync {
    fn space(&self) -> SpaceTag;
    fn len(&self) -> usize;
    fn is_empty(&self) -> bool {
        self.len() == 0
    }
    fn remoteness(&self) -> Vec<f64>;
    fn param(&self, index: usize) -> OperatorParam;
    /// `‖L_i f‖_Y` for every entry `i`, in grid order.
    fn evaluate(&self, f: &FunctionData) -> Result<Vec<f64>>;
}

pub struct OperatorFamilyGrid {
    evaluator: Box<dyn FamilyEvaluator>,
    remoteness: Vec<f64>,
    allowance: f64,
    tail_levels: usize,
}

impl std::fmt::Debug for OperatorFamilyGrid {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("OperatorFamilyGrid")
            .field("space", &self.evaluator.space())
            .field("entries", &self.remoteness.len())
            .field("allowance", &self.allowance)
            .field("tail_levels", &self.tail_levels)
            .finish()
    }
}

impl OperatorFamilyGrid {
    /// Wrap an evaluator. `allowance` is the relative grid-resolution
    /// allowance added to limsup uncertainties; `tail_levels` the default
    /// length of the scale ladder.
    pub fn new(evaluator: Box<dyn FamilyEvaluator>, allowance: f64, tail_levels: usize) -> Result<Self> {
        if evaluator.is_empty() {
            return Err(Error::EmptyGrid);
        }
        let remoteness = evaluator.remoteness();
        if remoteness.iter().any(|&r| !(r > 0.0 && r.is_finite())) {
            return Err(Error::InvalidParameter("remoteness must be positive".into()));
        }
        if !(allowance >= 0.0) || tail_levels < 3 {
            return Err(Error::InvalidParameter(
                "allowance must be non-negative and the ladder needs at least 3 levels".into(),
            ));
        }
        let grid = Self {
            evaluator,
            remoteness,
            allowance,
            tail_levels,
        };
        let levels = grid.dyadic_levels();
        if levels < 6 {
            return Err(Error::ResolutionTooCoarse { levels });
        }
        Ok(grid)
    }

    pub fn space(&self) -> SpaceTag {
        self.evaluator.space()
    }

    pub fn len(&self) -> usize {
        self.remoteness.len()
    }

    pub fn is_empty(&self) -> bool {
        self.remoteness.is_empty()
    }

    pub fn remoteness(&self) -> &[f64] {
        &self.remoteness
    }

    pub fn param(&self, index: usize) -> OperatorParam {
        self.evaluator.param(index)
    }

    pub fn allowance(&self) -> f64 {
        self.allowance
    }

    fn extremes(&self) -> (f64, f64) {
        self.remoteness
            .iter()
            .fold((f64::INFINITY, 0.0f64), |(lo, hi), &r| (lo.min(r), hi.max(r)))
    }

    /// Number of dyadic levels spanned by the remoteness values.
    pub fn dyadic_levels(&self) -> usize {
        let (lo, hi) = self.extremes();
        ((hi / lo).log2() + SCALE_TOL).floor() as usize + 1
    }

    /// Ladder `t_k = t_0 2^{-k}` ending at the finest remoteness on the grid.
    pub fn default_scales(&self) -> Vec<f64> {
        let (lo, _) = self.extremes();
        let k = self.tail_levels.min(self.dyadic_levels());
        (0..k).map(|i| lo * 2f64.powi((k - 1 - i) as i32)).collect()
    }

    pub fn evaluate(&self, f: &FunctionData) -> Result<Vec<f64>> {
        let values = self.evaluator.evaluate(f)?;
        debug_assert_eq!(values.len(), self.len());
        if let Some(i) = values.iter().position(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(Error::SingularNode {
                node: format!("{:?}", self.param(i)),
            });
        }
        Ok(values)
    }

    pub fn report(&self, values: &[f64]) -> SeminormReport {
        // first maximum in grid order
        let (index, value) =
            values.iter().copied().enumerate().fold(
                (0, f64::NEG_INFINITY),
                |best, (i, v)| if v > best.1 { (i, v) } else { best },
            );
        SeminormReport {
            value,
            argmax_param: self.param(index),
            grid_size: self.len(),
        }
    }

    pub fn profile(&self, values: &[f64], scales: &[f64]) -> Result<TailProfile> {
        TailProfile::from_values(&self.remoteness, values, scales)
    }
}

/// `sup_𝓛 ‖Lf‖` over the grid.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SeminormReport {
    pub value: f64,
    pub argmax_param: OperatorParam,
    pub grid_size: usize,
}

/// Tail sups `S(t_k)` over a decreasing ladder of scales. Levels with no
/// entries are `None`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TailProfile {
    pub scales: Vec<f64>,
    pub tail_sups: Vec<Option<f64>>,
}

impl TailProfile {
    pub fn from_values(remoteness: &[f64], values: &[f64], scales: &[f64]) -> Result<Self> {
        if remoteness.len() != values.len() {
            return Err(Error::InvalidParameter("values do not match the grid".into()));
        }
        if scales.windows(2).any(|w| !(w[0] > w[1])) || scales.iter().any(|&t| !(t > 0.0)) {
            return Err(Error::InvalidParameter(
                "scales must be positive and strictly decreasing".into(),
            ));
        }
        // Deepest level each entry belongs to, then a suffix max: S is
        // non-increasing by construction.
        let k = scales.len();
        let mut deepest: Vec<Option<f64>> = vec![None; k];
        for (&r, &v) in remoteness.iter().zip(values) {
            let level = scales.partition_point(|&t| r <= t * (1.0 + SCALE_TOL));
            if level == 0 {
                continue;
            }
            let slot = &mut deepest[level - 1];
            *slot = Some(slot.map_or(v, |m: f64| m.max(v)));
        }
        let mut tail_sups = vec![None; k];
        let mut running: Option<f64> = None;
        for i in (0..k).rev() {
            running = match (running, deepest[i]) {
                (Some(a), Some(b)) => Some(a.max(b)),
                (a, b) => a.or(b),
            };
            tail_sups[i] = running;
        }
        Ok(Self {
            scales: scales.to_vec(),
            tail_sups,
        })
    }

    pub fn non_empty_levels(&self) -> usize {
        self.tail_sups.iter().filter(|s| s.is_some()).count()
    }

    /// CSV with columns `scale,tail_sup`; empty levels leave the second
    /// column blank.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["scale", "tail_sup"])?;
        for (t, s) in self.scales.iter().zip(&self.tail_sups) {
            let s = s.map(|v| v.to_string()).unwrap_or_default();
            w.write_record([t.to_string(), s])?;
        }
        w.flush()?;
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LimsupEstimate {
    pub estimate: f64,
    pub uncertainty: f64,
}

/// Last non-empty tail level, with uncertainty `|S_K − S_{K−1}|` plus the
/// relative resolution allowance.
pub fn limsup_estimate(profile: &TailProfile, allowance: f64) -> Result<LimsupEstimate> {
    let filled: Vec<f64> = profile.tail_sups.iter().flatten().copied().collect();
    if filled.len() < 3 {
        return Err(Error::InsufficientTail { levels: filled.len() });
    }
    let last = filled[filled.len() - 1];
    let prev = filled[filled.len() - 2];
    Ok(LimsupEstimate {
        estimate: last,
        uncertainty: (last - prev).abs() + allowance * last,
    })
}

pub fn seminorm_sup(family: &OperatorFamilyGrid, f: &FunctionData) -> Result<SeminormReport> {
    Ok(family.report(&family.evaluate(f)?))
}

pub fn tail_profile(family: &OperatorFamilyGrid, f: &FunctionData, scales: &[f64]) -> Result<TailProfile> {
    family.profile(&family.evaluate(f)?, scales)
}
