use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::Result;
use crate::family::{FamilyEvaluator, OperatorParam};
use crate::funcrep::{FunctionData, TaylorFunction};
use crate::spaces::SpaceTag;

/// `(1 − |w|²)|f'(w)|`.
pub fn bloch_term(f: &TaylorFunction, w: Complex64) -> Result<f64> {
    Ok((1.0 - w.norm_sqr()) * f.eval_deriv(w)?.norm())
}

/// Points of the disc, remoteness `1 − |w|`.
pub struct BlochFamily {
    points: Vec<Complex64>,
}

impl BlochFamily {
    pub fn new(points: Vec<Complex64>) -> Self {
        Self { points }
    }
}

impl FamilyEvaluator for BlochFamily {
    fn space(&self) -> SpaceTag {
        SpaceTag::Bloch
    }

    fn len(&self) -> usize {
        self.points.len()
    }

    fn remoteness(&self) -> Vec<f64> {
        self.points.iter().map(|w| 1.0 - w.norm()).collect()
    }

    fn param(&self, index: usize) -> OperatorParam {
        let w = self.points[index];
        OperatorParam::Point { re: w.re, im: w.im }
    }

    fn evaluate(&self, f: &FunctionData) -> Result<Vec<f64>> {
        let f = f.as_taylor()?;
        let r = self.points.iter().fold(0.0f64, |m, w| m.max(w.norm()));
        f.check_radius(r)?;
        Ok(self
            .points
            .par_iter()
            .map(|&w| (1.0 - w.norm_sqr()) * f.deriv_unchecked(w).norm())
            .collect())
    }
}
