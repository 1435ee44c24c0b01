use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::family::{FamilyEvaluator, OperatorParam};
use crate::funcrep::{Automorphism, DiskRule, FunctionData, QuadratureRule, TaylorFunction};
use crate::spaces::{KKernel, SpaceTag};

/// Disc rule with `K(log 1/r)` folded into the radial weights.
struct KernelRule {
    disk: DiskRule,
    weights: Vec<f64>,
}

impl KernelRule {
    fn new(kernel: &KKernel, rule: QuadratureRule) -> Result<Self> {
        let disk = DiskRule::new(rule)?;
        let weights = disk
            .radii
            .iter()
            .zip(&disk.radial_weights)
            .map(|(&r, &w)| w * kernel.eval((1.0 / r).ln()))
            .collect();
        Ok(Self { disk, weights })
    }

    /// `∫_𝔻 |f'(φ_a(w))|² |φ_a'(w)|² K(log 1/|w|) dA(w)`.
    fn integral(&self, f: &TaylorFunction, a: Complex64, checked: bool) -> Result<f64> {
        // φ_a(w) = (a − w)q and φ_a'(w) = (|a|² − 1)q² with q = 1/(1 − āw)
        Automorphism::involution(a)?; // rejects |a| ≥ 1
        let (ac, shrink) = (a.conj(), a.norm_sqr() - 1.0);
        let mut total = 0.0;
        for (&r, &wk) in self.disk.radii.iter().zip(&self.weights) {
            let mut ring = 0.0;
            for &u in &self.disk.angles {
                let w = u * r;
                let q = (Complex64::new(1.0, 0.0) - ac * w).inv();
                let (z, dz) = ((a - w) * q, q * q * shrink);
                let d = if checked {
                    f.eval_deriv(z)?
                } else {
                    f.deriv_unchecked(z)
                };
                ring += (d * dz).norm_sqr();
            }
            total += wk * ring;
        }
        if !total.is_finite() {
            return Err(Error::SingularNode {
                node: format!("Q_K integrand at a = {a}"),
            });
        }
        Ok(total)
    }
}

fn needs_checks(f: &TaylorFunction) -> bool {
    f.closed_form().is_none() && !f.is_complete()
}

/// The `Q_K` integral `∫_𝔻 |f'|² K(log 1/|φ_a|) dA` in pullback form; this is
/// the square of the family's reported value.
pub fn qk_local(f: &TaylorFunction, a: Complex64, kernel: &KKernel, rule: QuadratureRule) -> Result<f64> {
    KernelRule::new(kernel, rule)?.integral(f, a, needs_checks(f))
}

/// Centres `a` of the automorphisms `φ_a` (with `λ = 1`), remoteness `1 − |a|`.
pub struct QkFamily {
    centres: Vec<Complex64>,
    rule: KernelRule,
}

impl QkFamily {
    pub fn new(centres: Vec<Complex64>, kernel: KKernel, rule: QuadratureRule) -> Result<Self> {
        if let Some(a) = centres.iter().find(|a| !(a.norm() < 1.0)) {
            return Err(Error::OutsideUnitDisc { modulus: a.norm() });
        }
        Ok(Self {
            centres,
            rule: KernelRule::new(&kernel, rule)?,
        })
    }
}

impl FamilyEvaluator for QkFamily {
    fn space(&self) -> SpaceTag {
        SpaceTag::Qk
    }

    fn len(&self) -> usize {
        self.centres.len()
    }

    fn remoteness(&self) -> Vec<f64> {
        self.centres.iter().map(|a| 1.0 - a.norm()).collect()
    }

    fn param(&self, index: usize) -> OperatorParam {
        let a = self.centres[index];
        OperatorParam::Automorphism { a_re: a.re, a_im: a.im }
    }

    fn evaluate(&self, f: &FunctionData) -> Result<Vec<f64>> {
        let f = f.as_taylor()?;
        let checked = needs_checks(f);
        self.centres
            .par_iter()
            .map(|&a| self.rule.integral(f, a, checked).map(f64::sqrt))
            .collect()
    }
}
