//! Disc automorphisms `φ_{a,λ}(z) = λ (a − z) / (1 − ā z)`.

use num_complex::Complex64;

use crate::error::{Error, Result};

const UNIMODULAR_TOL: f64 = 1e-12;

/// A disc automorphism with `|a| < 1` and `|λ| = 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Automorphism {
    a: Complex64,
    lambda: Complex64,
}

impl Automorphism {
    pub fn new(a: Complex64, lambda: Complex64) -> Result<Self> {
        if !(a.norm() < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "automorphism centre must satisfy |a| < 1, got {}",
                a.norm()
            )));
        }
        if (lambda.norm() - 1.0).abs() > UNIMODULAR_TOL {
            return Err(Error::InvalidParameter(format!(
                "rotation must be unimodular, got |λ| = {}",
                lambda.norm()
            )));
        }
        Ok(Self { a, lambda })
    }

    /// The involution `φ_{a,1}`.
    pub fn involution(a: Complex64) -> Result<Self> {
        Self::new(a, Complex64::new(1.0, 0.0))
    }

    pub fn a(&self) -> Complex64 {
        self.a
    }

    pub fn lambda(&self) -> Complex64 {
        self.lambda
    }

    /// Value and derivative at `z`, with `φ' = λ(|a|² − 1)/(1 − āz)²`.
    #[inline]
    pub fn eval(&self, z: Complex64) -> (Complex64, Complex64) {
        let denom = Complex64::new(1.0, 0.0) - self.a.conj() * z;
        let value = self.lambda * (self.a - z) / denom;
        let deriv = self.lambda * (self.a.norm_sqr() - 1.0) / (denom * denom);
        (value, deriv)
    }

    /// `φ(0) = λa`.
    pub fn at_origin(&self) -> Complex64 {
        self.lambda * self.a
    }
}

/// Apply `φ_{a,λ}` at a point of the closed disc.
pub fn mobius_apply(a: Complex64, lambda: Complex64, z: Complex64) -> Result<(Complex64, Complex64)> {
    if z.norm() > 1.0 + 1e-12 {
        return Err(Error::OutsideUnitDisc { modulus: z.norm() });
    }
    Ok(Automorphism::new(a, lambda)?.eval(z))
}
