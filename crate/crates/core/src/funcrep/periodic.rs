use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub(crate) fn check_grid_size(n: usize) -> Result<()> {
    if n < 8 || !n.is_power_of_two() {
        return Err(Error::InvalidParameter(format!(
            "grid size must be a power of two >= 8, got {n}"
        )));
    }
    Ok(())
}

/// Samples of a function on the uniform grid `θ_j = 2πj/N` of the circle.
#[derive(Clone, Debug, PartialEq)]
pub struct PeriodicSamples {
    values: Vec<Complex64>,
}

impl PeriodicSamples {
    pub fn new(values: Vec<Complex64>) -> Result<Self> {
        check_grid_size(values.len())?;
        if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::InvalidParameter("non-finite sample".into()));
        }
        Ok(Self { values })
    }

    pub fn from_fn(n: usize, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        check_grid_size(n)?;
        let h = TAU / n as f64;
        Self::new((0..n).map(|j| f(j as f64 * h)).collect())
    }

    pub fn from_real_fn(n: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::from_fn(n, |t| Complex64::new(f(t), 0.0))
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn step(&self) -> f64 {
        TAU / self.len() as f64
    }

    pub fn mean(&self) -> Complex64 {
        self.values.iter().sum::<Complex64>() / self.len() as f64
    }

    /// Rotate by `shift` grid cells: the result at node `j` is `f(θ_{j-shift})`.
    pub fn rotate(&self, shift: usize) -> Self {
        let n = self.len();
        let values = (0..n).map(|j| self.values[(j + n - shift % n) % n]).collect();
        Self { values }
    }

    pub(crate) fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        Self {
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    pub(crate) fn zip_with(&self, other: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Result<Self> {
        if self.len() != other.len() {
            return Err(Error::InvalidParameter(format!(
                "grid sizes differ: {} vs {}",
                self.len(),
                other.len()
            )));
        }
        Ok(Self {
            values: self.values.iter().zip(&other.values).map(|(&a, &b)| f(a, b)).collect(),
        })
    }
}

/// A closed arc of the circle given by its midpoint and length.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Arc {
    pub midpoint: f64,
    pub length: f64,
}

impl Arc {
    pub fn new(midpoint: f64, length: f64) -> Result<Self> {
        if !(length > 0.0 && length <= TAU * (1.0 + 1e-12)) || !midpoint.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "arc length must lie in (0, 2π], got {length}"
            )));
        }
        Ok(Self {
            midpoint: midpoint.rem_euclid(TAU),
            length: length.min(TAU),
        })
    }

    /// Arc with a given start angle, covering `[start, start + length)`.
    pub fn from_start(start: f64, length: f64) -> Result<Self> {
        Self::new(start + 0.5 * length, length)
    }

    pub fn full_circle() -> Self {
        Self {
            midpoint: PI,
            length: TAU,
        }
    }

    pub fn is_full(&self) -> bool {
        self.length >= TAU * (1.0 - 1e-12)
    }

    /// Snap the endpoints to the nearest nodes of an `n`-point grid.
    pub fn snap(&self, n: usize) -> Result<ArcSpan> {
        let h = TAU / n as f64;
        let cells = ((self.length / h).round() as usize).min(n);
        if cells < 2 {
            return Err(Error::ArcUnderResolved {
                length: self.length,
                cells,
            });
        }
        let start = ((self.midpoint - 0.5 * self.length) / h).round() as i64;
        Ok(ArcSpan {
            start: start.rem_euclid(n as i64) as usize,
            cells,
        })
    }
}

/// The node set `start, start + 1, ..., start + cells - 1` (mod N) an arc snaps to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ArcSpan {
    pub start: usize,
    pub cells: usize,
}

impl ArcSpan {
    pub fn indices(&self, n: usize) -> impl Iterator<Item = usize> + '_ {
        let start = self.start;
        (0..self.cells).map(move |k| (start + k) % n)
    }
}

/// Prefix sums of mean-centred samples, giving O(1) arc averages.
///
/// Centring keeps the running sums small, so the difference of two prefix
/// values loses little precision even on long grids.
#[derive(Clone, Debug)]
pub struct ArcAverager {
    prefix: Vec<Complex64>,
    mean: Complex64,
}

impl ArcAverager {
    pub fn new(values: &[Complex64]) -> Self {
        let n = values.len();
        let mean = values.iter().sum::<Complex64>() / n as f64;
        let mut prefix = Vec::with_capacity(n + 1);
        let mut acc = Complex64::new(0.0, 0.0);
        prefix.push(acc);
        for &v in values {
            acc += v - mean;
            prefix.push(acc);
        }
        Self { prefix, mean }
    }

    pub fn len(&self) -> usize {
        self.prefix.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn average(&self, span: ArcSpan) -> Complex64 {
        let n = self.len();
        let end = span.start + span.cells;
        let sum = if end <= n {
            self.prefix[end] - self.prefix[span.start]
        } else {
            (self.prefix[n] - self.prefix[span.start]) + self.prefix[end - n]
        };
        sum / span.cells as f64 + self.mean
    }
}

/// Average of `f` over the arc `I`, by the periodic trapezoid sum over the
/// snapped node set.
pub fn arc_average(f: &PeriodicSamples, arc: &Arc) -> Result<Complex64> {
    let span = arc.snap(f.len())?;
    Ok(ArcAverager::new(f.values()).average(span))
}
