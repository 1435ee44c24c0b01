//! Function representations shared by every space: circle and torus
//! samples, Taylor series on the disc, samples on Euclidean boxes, plus the
//! quadrature and Möbius helpers they need.

mod euclid;
pub mod mobius;
mod periodic;
pub mod quadrature;
mod taylor;
mod torus;

use std::f64::consts::TAU;

use num_complex::Complex64;

pub use euclid::{EuclideanSamples, GridBox};
pub use mobius::{mobius_apply, Automorphism};
pub use periodic::{arc_average, Arc, ArcAverager, ArcSpan, PeriodicSamples};
pub use quadrature::{disk_quadrature, gauss_legendre, DiskRule, QuadratureRule};
pub use taylor::{ClosedForm, TaylorFunction};
pub use torus::TorusSamples;

use crate::error::{Error, Result};
use crate::spaces::WeightV;

/// Any function the toolkit can take a seminorm of.
#[derive(Clone, Debug, PartialEq)]
pub enum FunctionData {
    Periodic(PeriodicSamples),
    Taylor(TaylorFunction),
    Torus(TorusSamples),
    Euclidean(EuclideanSamples),
}

impl FunctionData {
    pub fn kind(&self) -> &'static str {
        match self {
            FunctionData::Periodic(_) => "periodic samples",
            FunctionData::Taylor(_) => "Taylor function",
            FunctionData::Torus(_) => "torus samples",
            FunctionData::Euclidean(_) => "Euclidean samples",
        }
    }

    pub fn as_periodic(&self) -> Result<&PeriodicSamples> {
        match self {
            FunctionData::Periodic(f) => Ok(f),
            other => Err(mismatch("periodic samples", other)),
        }
    }

    pub fn as_taylor(&self) -> Result<&TaylorFunction> {
        match self {
            FunctionData::Taylor(f) => Ok(f),
            other => Err(mismatch("Taylor function", other)),
        }
    }

    pub fn as_torus(&self) -> Result<&TorusSamples> {
        match self {
            FunctionData::Torus(f) => Ok(f),
            other => Err(mismatch("torus samples", other)),
        }
    }

    pub fn as_euclidean(&self) -> Result<&EuclideanSamples> {
        match self {
            FunctionData::Euclidean(f) => Ok(f),
            other => Err(mismatch("Euclidean samples", other)),
        }
    }

    /// `c · f` for a real scalar.
    pub fn scale(&self, c: f64) -> Self {
        let cz = Complex64::new(c, 0.0);
        match self {
            FunctionData::Periodic(f) => FunctionData::Periodic(f.map(|v| v * c)),
            FunctionData::Taylor(f) => FunctionData::Taylor(f.scale(cz)),
            FunctionData::Torus(f) => FunctionData::Torus(f.map(|v| v * c)),
            FunctionData::Euclidean(f) => {
                FunctionData::Euclidean(f.with_values(f.values().iter().map(|v| v * c).collect()))
            }
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        Ok(match (self, other) {
            (FunctionData::Periodic(a), FunctionData::Periodic(b)) => {
                FunctionData::Periodic(a.zip_with(b, |x, y| x + y)?)
            }
            (FunctionData::Taylor(a), FunctionData::Taylor(b)) => FunctionData::Taylor(a.add(b)),
            (FunctionData::Torus(a), FunctionData::Torus(b)) => FunctionData::Torus(a.zip_with(b, |x, y| x + y)?),
            (FunctionData::Euclidean(a), FunctionData::Euclidean(b)) => {
                FunctionData::Euclidean(a.zip_with(b, |x, y| x + y)?)
            }
            (a, b) => return Err(mismatch(a.kind(), b)),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(-1.0))
    }
}

fn mismatch(expected: &'static str, found: &FunctionData) -> Error {
    Error::Mismatch {
        expected,
        found: found.kind(),
    }
}

/// The ambient (X) norm a space is embedded in.
#[derive(Clone, Debug)]
pub enum AmbientNorm {
    /// `L²(𝕋)` modulo constants.
    L2Circle,
    /// Bergman norm `(π Σ |a_k|²/(k+1))^{1/2}`.
    Bergman,
    /// Hardy norm `(Σ |a_k|²)^{1/2}`.
    Hardy,
    /// `L²(𝕋²)` modulo constants.
    L2Torus,
    /// Sup norm over the sample grid; stands in for the fractional Sobolev
    /// norm of the Hölder space.
    Sup,
    /// `(∫_Ω |f|² v² dA)^{1/2}`.
    WeightedL2 { weight: WeightV, rule: QuadratureRule },
}

/// Norm of `f` in the ambient space.
pub fn x_norm(norm: &AmbientNorm, f: &FunctionData) -> Result<f64> {
    match norm {
        AmbientNorm::L2Circle => {
            let f = f.as_periodic()?;
            let mean = f.mean();
            let ss: f64 = f.values().iter().map(|v| (v - mean).norm_sqr()).sum();
            Ok((ss * f.step()).sqrt())
        }
        AmbientNorm::L2Torus => {
            let f = f.as_torus()?;
            let mean = f.mean();
            let ss: f64 = f.values().iter().map(|v| (v - mean).norm_sqr()).sum();
            let h = TAU / f.n() as f64;
            Ok((ss * h * h).sqrt())
        }
        AmbientNorm::Bergman => {
            let f = f.as_taylor()?;
            let ss: f64 = f
                .coeffs()
                .iter()
                .enumerate()
                .map(|(k, a)| a.norm_sqr() / (k as f64 + 1.0))
                .sum();
            Ok((std::f64::consts::PI * ss).sqrt())
        }
        AmbientNorm::Hardy => {
            let f = f.as_taylor()?;
            Ok(f.coeffs().iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt())
        }
        AmbientNorm::Sup => {
            let f = f.as_euclidean()?;
            Ok(f.values().iter().fold(0.0f64, |m, v| m.max(v.abs())))
        }
        AmbientNorm::WeightedL2 { weight, rule } => {
            let f = f.as_taylor()?;
            let outer = weight.domain.outer_radius();
            let disk = DiskRule::new(*rule)?;
            let mut total = 0.0;
            let mut result = Ok(());
            disk.for_each(|_, u, w| {
                let z = u * outer;
                if result.is_err() || !weight.domain.contains(z) {
                    return;
                }
                match f.eval(z) {
                    Ok(v) => total += w * (v.norm() * weight.eval(z)).powi(2),
                    Err(e) => result = Err(e),
                }
            });
            result?;
            Ok((total * outer * outer).sqrt())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    #[test]
    fn ambient_norm_examples() {
        let z = FunctionData::Taylor(TaylorFunction::monomial(1, Complex64::new(1.0, 0.0)));
        assert_abs_diff_eq!(
            x_norm(&AmbientNorm::Bergman, &z).unwrap(),
            (PI / 2.0).sqrt(),
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(x_norm(&AmbientNorm::Hardy, &z).unwrap(), 1.0);
        let s = FunctionData::Periodic(PeriodicSamples::from_real_fn(64, f64::sin).unwrap());
        assert_abs_diff_eq!(x_norm(&AmbientNorm::L2Circle, &s).unwrap(), PI.sqrt(), epsilon = 1e-13);
    }

    #[test]
    fn constant_is_invisible_modulo_constants() {
        let c = FunctionData::Periodic(PeriodicSamples::from_real_fn(32, |_| 3.0).unwrap());
        assert!(x_norm(&AmbientNorm::L2Circle, &c).unwrap() < 1e-14);
        let t = FunctionData::Torus(TorusSamples::from_fn(16, |_, _| Complex64::new(2.0, 1.0)).unwrap());
        assert!(x_norm(&AmbientNorm::L2Torus, &t).unwrap() < 1e-14);
    }

    #[test]
    fn parseval_for_trigonometric_polynomials() {
        // modes 1..5 with known coefficients: ‖f‖² = 2π Σ |c_k|²
        let coeffs = [(1, 0.5), (2, -1.0), (5, 0.25), (-3, 0.75)];
        let f = PeriodicSamples::from_fn(32, |t| {
            coeffs
                .iter()
                .map(|&(k, c)| Complex64::from_polar(c, k as f64 * t))
                .sum()
        })
        .unwrap();
        let exact = (TAU * coeffs.iter().map(|(_, c)| c * c).sum::<f64>()).sqrt();
        let got = x_norm(&AmbientNorm::L2Circle, &FunctionData::Periodic(f)).unwrap();
        assert!((got - exact).abs() < 1e-10 * exact);
    }

    #[test]
    fn mismatched_representation_is_an_error() {
        let z = FunctionData::Taylor(TaylorFunction::zero());
        assert!(matches!(
            x_norm(&AmbientNorm::L2Circle, &z),
            Err(Error::Mismatch { .. })
        ));
        let s = FunctionData::Periodic(PeriodicSamples::from_real_fn(8, f64::cos).unwrap());
        assert!(z.sub(&s).is_err());
    }
}
