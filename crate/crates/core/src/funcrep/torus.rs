use std::f64::consts::TAU;

use num_complex::Complex64;

use super::periodic::{check_grid_size, PeriodicSamples};
use crate::error::{Error, Result};

/// Samples on the `N × N` grid of 𝕋², row-major: `values[j * N + k] = F(θ_j, ψ_k)`.
#[derive(Clone, Debug, PartialEq)]
pub struct TorusSamples {
    n: usize,
    values: Vec<Complex64>,
}

impl TorusSamples {
    pub fn new(n: usize, values: Vec<Complex64>) -> Result<Self> {
        check_grid_size(n)?;
        if values.len() != n * n {
            return Err(Error::InvalidParameter(format!(
                "torus grid needs {} samples, got {}",
                n * n,
                values.len()
            )));
        }
        if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::InvalidParameter("non-finite sample".into()));
        }
        Ok(Self { n, values })
    }

    pub fn from_fn(n: usize, f: impl Fn(f64, f64) -> Complex64) -> Result<Self> {
        check_grid_size(n)?;
        let h = TAU / n as f64;
        let values = (0..n * n)
            .map(|idx| f((idx / n) as f64 * h, (idx % n) as f64 * h))
            .collect();
        Self::new(n, values)
    }

    /// `(g ⊗ h)(ζ, λ) = g(ζ) h(λ)`.
    pub fn tensor(g: &PeriodicSamples, h: &PeriodicSamples) -> Result<Self> {
        if g.len() != h.len() {
            return Err(Error::InvalidParameter("factor grids differ".into()));
        }
        let n = g.len();
        let values = g
            .values()
            .iter()
            .flat_map(|&a| h.values().iter().map(move |&b| a * b))
            .collect();
        Self::new(n, values)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    #[inline]
    pub fn at(&self, j: usize, k: usize) -> Complex64 {
        self.values[j * self.n + k]
    }

    pub fn mean(&self) -> Complex64 {
        self.values.iter().sum::<Complex64>() / self.values.len() as f64
    }

    pub(crate) fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        Self {
            n: self.n,
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    pub(crate) fn zip_with(&self, other: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::InvalidParameter(format!(
                "torus grids differ: {} vs {}",
                self.n, other.n
            )));
        }
        Ok(Self {
            n: self.n,
            values: self.values.iter().zip(&other.values).map(|(&a, &b)| f(a, b)).collect(),
        })
    }
}
