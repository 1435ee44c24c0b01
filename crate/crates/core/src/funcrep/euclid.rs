use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Uniform node grid on an axis-aligned box in ℝ¹ or ℝ².
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridBox {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub nodes: Vec<usize>,
}

impl GridBox {
    pub fn interval(lower: f64, upper: f64, nodes: usize) -> Result<Self> {
        let g = Self {
            lower: vec![lower],
            upper: vec![upper],
            nodes: vec![nodes],
        };
        g.validate()?;
        Ok(g)
    }

    pub fn rectangle(lower: [f64; 2], upper: [f64; 2], nodes: [usize; 2]) -> Result<Self> {
        let g = Self {
            lower: lower.to_vec(),
            upper: upper.to_vec(),
            nodes: nodes.to_vec(),
        };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        let dim = self.nodes.len();
        if !(1..=2).contains(&dim) || self.lower.len() != dim || self.upper.len() != dim {
            return Err(Error::InvalidParameter(
                "grid box must be 1- or 2-dimensional with matching bounds".into(),
            ));
        }
        for d in 0..dim {
            if self.nodes[d] < 2 || !(self.upper[d] > self.lower[d]) {
                return Err(Error::InvalidParameter(format!(
                    "axis {d}: need at least 2 nodes and upper > lower"
                )));
            }
        }
        let h0 = self.axis_step(0);
        for d in 1..dim {
            if (self.axis_step(d) - h0).abs() > 1e-9 * h0 {
                return Err(Error::InvalidParameter(
                    "grid step must be the same on every axis".into(),
                ));
            }
        }
        Ok(())
    }

    fn axis_step(&self, d: usize) -> f64 {
        (self.upper[d] - self.lower[d]) / (self.nodes[d] - 1) as f64
    }

    pub fn dim(&self) -> usize {
        self.nodes.len()
    }

    pub fn step(&self) -> f64 {
        self.axis_step(0)
    }

    pub fn len(&self) -> usize {
        self.nodes.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn diameter(&self) -> f64 {
        self.lower
            .iter()
            .zip(&self.upper)
            .map(|(a, b)| (b - a).powi(2))
            .sum::<f64>()
            .sqrt()
    }

    /// Multi-index of a flat node index (last axis fastest).
    pub fn index(&self, flat: usize) -> [usize; 2] {
        match self.dim() {
            1 => [flat, 0],
            _ => [flat / self.nodes[1], flat % self.nodes[1]],
        }
    }

    pub fn coords(&self, flat: usize) -> Vec<f64> {
        let idx = self.index(flat);
        (0..self.dim())
            .map(|d| self.lower[d] + idx[d] as f64 * self.step())
            .collect()
    }

    pub fn distance(&self, a: usize, b: usize) -> f64 {
        let (ia, ib) = (self.index(a), self.index(b));
        let dx = ia[0] as f64 - ib[0] as f64;
        let dy = ia[1] as f64 - ib[1] as f64;
        self.step() * (dx * dx + dy * dy).sqrt()
    }
}

/// Real samples of a Hölder function on a [`GridBox`].
#[derive(Clone, Debug, PartialEq)]
pub struct EuclideanSamples {
    grid: GridBox,
    values: Vec<f64>,
    alpha: f64,
}

impl EuclideanSamples {
    pub fn new(grid: GridBox, values: Vec<f64>, alpha: f64) -> Result<Self> {
        grid.validate()?;
        if values.len() != grid.len() {
            return Err(Error::InvalidParameter(format!(
                "grid has {} nodes but {} values were given",
                grid.len(),
                values.len()
            )));
        }
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "Hölder exponent must lie in (0, 1], got {alpha}"
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("non-finite sample".into()));
        }
        Ok(Self { grid, values, alpha })
    }

    pub fn from_fn(grid: GridBox, alpha: f64, f: impl Fn(&[f64]) -> f64) -> Result<Self> {
        let values = (0..grid.len()).map(|i| f(&grid.coords(i))).collect();
        Self::new(grid, values, alpha)
    }

    pub fn grid(&self) -> &GridBox {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub(crate) fn with_values(&self, values: Vec<f64>) -> Self {
        Self {
            grid: self.grid.clone(),
            values,
            alpha: self.alpha,
        }
    }

    pub(crate) fn zip_with(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        if self.grid != other.grid {
            return Err(Error::InvalidParameter("sample grids differ".into()));
        }
        Ok(self.with_values(self.values.iter().zip(&other.values).map(|(&a, &b)| f(a, b)).collect()))
    }
}
