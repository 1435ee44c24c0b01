use std::f64::consts::TAU;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::family::{FamilyEvaluator, OperatorParam};
use crate::funcrep::{FunctionData, TaylorFunction};
use crate::spaces::{shell_points, Domain, SpaceTag, WeightV};

/// `v(z)|f(z)|`.
pub fn weighted_term(f: &TaylorFunction, v: &WeightV, z: Complex64) -> Result<f64> {
    if !v.domain.contains(z) {
        return Err(Error::InvalidParameter(format!("point {z} lies outside the domain")));
    }
    Ok(v.eval(z) * f.eval(z)?.norm())
}

/// Grid points accumulating at every boundary component of Ω.
pub(crate) fn domain_points(domain: &Domain, shells: usize, angles: usize, origin: bool) -> Vec<Complex64> {
    match *domain {
        Domain::Disc { radius } => shell_points(shells, angles, origin, radius),
        Domain::Annulus { inner, outer } => {
            let half = 0.5 * (outer - inner);
            let mut radii = vec![inner + half];
            for k in 1..=shells {
                let d = half * 2f64.powi(-(k as i32));
                radii.push(outer - d);
                radii.push(inner + d);
            }
            radii
                .into_iter()
                .flat_map(|r| (0..angles).map(move |j| Complex64::from_polar(r, TAU * j as f64 / angles as f64)))
                .collect()
        }
    }
}

/// Points of Ω, remoteness `min(dist(z, ∂Ω), 1/(1 + |z|))`.
pub struct WeightedFamily {
    points: Vec<Complex64>,
    weights: Vec<f64>,
    weight: WeightV,
}

impl WeightedFamily {
    pub fn new(points: Vec<Complex64>, weight: WeightV) -> Self {
        let weights = points.iter().map(|&z| weight.eval(z)).collect();
        Self {
            points,
            weights,
            weight,
        }
    }
}

impl FamilyEvaluator for WeightedFamily {
    fn space(&self) -> SpaceTag {
        SpaceTag::Weighted
    }

    fn len(&self) -> usize {
        self.points.len()
    }

    fn remoteness(&self) -> Vec<f64> {
        self.points
            .iter()
            .map(|&z| self.weight.boundary_remoteness(z))
            .collect()
    }

    fn param(&self, index: usize) -> OperatorParam {
        let z = self.points[index];
        OperatorParam::Point { re: z.re, im: z.im }
    }

    fn evaluate(&self, f: &FunctionData) -> Result<Vec<f64>> {
        let f = f.as_taylor()?;
        let r = self.points.iter().fold(0.0f64, |m, z| m.max(z.norm()));
        f.check_radius(r)?;
        Ok(self
            .points
            .par_iter()
            .zip(&self.weights)
            .map(|(&z, &v)| v * f.eval_unchecked(z).norm())
            .collect())
    }
}
