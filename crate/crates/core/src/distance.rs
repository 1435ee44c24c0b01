//! Distance to the little space as the limsup of `‖Lf‖` at infinity, and
//! the lower-bound check `limsup ≤ ‖f − g‖_M` against little approximants.

use rayon::prelude::*;
use serde::Serialize;

use crate::approx::little_threshold;
use crate::error::Result;
use crate::family::{limsup_estimate, OperatorFamilyGrid, SeminormReport, TailProfile};
use crate::funcrep::FunctionData;
use crate::spaces::{build_family_for, SpaceDescriptor};

/// Absolute slack when comparing two grid sups.
pub const SANDWICH_SLACK: f64 = 1e-3;

#[derive(Clone, Debug, Serialize)]
pub struct DistanceEstimate {
    pub estimate: f64,
    pub uncertainty: f64,
    pub profile: TailProfile,
}

fn estimate_on(grid: &OperatorFamilyGrid, values: &[f64]) -> Result<DistanceEstimate> {
    let profile = grid.profile(values, &grid.default_scales())?;
    let est = limsup_estimate(&profile, grid.allowance())?;
    Ok(DistanceEstimate {
        estimate: est.estimate,
        uncertainty: est.uncertainty,
        profile,
    })
}

/// Tail estimate of `dist(f, M₀)` on the space's default grid and ladder.
pub fn distance_estimate(space: &SpaceDescriptor, f: &FunctionData) -> Result<DistanceEstimate> {
    let grid = build_family_for(space, f)?;
    let values = grid.evaluate(f)?;
    estimate_on(&grid, &values)
}

#[derive(Clone, Debug, Serialize)]
pub struct UpperBound {
    pub id: String,
    pub value: f64,
    /// Tail estimate of the approximant itself.
    pub tail_estimate: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Rejection {
    pub id: String,
    pub tail_estimate: Option<f64>,
    pub threshold: f64,
    pub reason: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct DistanceReport {
    pub limsup_estimate: f64,
    pub uncertainty: f64,
    pub seminorm: SeminormReport,
    pub tail_profile: TailProfile,
    pub upper_bounds: Vec<UpperBound>,
    pub best_upper: Option<f64>,
    pub sandwich_ok: bool,
    /// `limsup(f) ≤ ‖f − g‖ + tail(g) + uncertainty + slack` for every bound.
    /// This holds on any grid; `sandwich_ok` can fail while it holds when a
    /// certified approximant keeps a tail above the estimate's uncertainty.
    pub triangle_ok: bool,
    pub slack: f64,
    pub rejected: Vec<Rejection>,
}

/// Confront the tail estimate of `f` with `‖f − g‖_M` for each little `g`.
/// Approximants whose own tail estimate is not below
/// `max(1e-2, 5% ‖f‖_M)` are rejected rather than used.
pub fn sandwich_check(
    space: &SpaceDescriptor,
    f: &FunctionData,
    approximants: &[(String, FunctionData)],
) -> Result<DistanceReport> {
    sandwich_check_with_slack(space, f, approximants, SANDWICH_SLACK)
}

pub fn sandwich_check_with_slack(
    space: &SpaceDescriptor,
    f: &FunctionData,
    approximants: &[(String, FunctionData)],
    slack: f64,
) -> Result<DistanceReport> {
    let grid = build_family_for(space, f)?;
    let values = grid.evaluate(f)?;
    let seminorm = grid.report(&values);
    let est = estimate_on(&grid, &values)?;
    let threshold = little_threshold(seminorm.value);

    enum Outcome {
        Bound(UpperBound),
        Rejected(Rejection),
    }
    let outcomes = approximants
        .par_iter()
        .map(|(id, g)| -> Result<Outcome> {
            let gv = grid.evaluate(g)?;
            let tail = estimate_on(&grid, &gv).ok().map(|e| e.estimate);
            match tail {
                Some(t) if t < threshold => {
                    let diff = f.sub(g)?;
                    let value = grid.evaluate(&diff)?.into_iter().fold(0.0, f64::max);
                    Ok(Outcome::Bound(UpperBound {
                        id: id.clone(),
                        value,
                        tail_estimate: t,
                    }))
                }
                _ => Ok(Outcome::Rejected(Rejection {
                    id: id.clone(),
                    tail_estimate: tail,
                    threshold,
                    reason: "approximant is not certified little".into(),
                })),
            }
        })
        .collect::<Result<Vec<_>>>()?;

    let mut upper_bounds = Vec::new();
    let mut rejected = Vec::new();
    for o in outcomes {
        match o {
            Outcome::Bound(b) => upper_bounds.push(b),
            Outcome::Rejected(r) => rejected.push(r),
        }
    }
    upper_bounds.sort_by(|a, b| a.id.cmp(&b.id));
    rejected.sort_by(|a, b| a.id.cmp(&b.id));
    let best_upper = upper_bounds.iter().map(|b| b.value).reduce(f64::min);
    let sandwich_ok = upper_bounds
        .iter()
        .all(|b| est.estimate <= b.value + est.uncertainty + slack);
    let triangle_ok = upper_bounds
        .iter()
        .all(|b| est.estimate <= b.value + b.tail_estimate + est.uncertainty + slack);
    Ok(DistanceReport {
        limsup_estimate: est.estimate,
        uncertainty: est.uncertainty,
        seminorm,
        tail_profile: est.profile,
        upper_bounds,
        best_upper,
        sandwich_ok,
        triangle_ok,
        slack,
        rejected,
    })
}
