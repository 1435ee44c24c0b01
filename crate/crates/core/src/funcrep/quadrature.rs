//! Polar product rules on the unit disc: Gauss–Legendre in the radius,
//! uniform in the angle.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Gauss–Legendre nodes and weights on `[-1, 1]`, ascending.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Tricomi's initial guess, then Newton on P_n.
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d.is_finite() {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[n - 1 - i] = x;
        nodes[i] = -x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// `n_r` radial Gauss–Legendre nodes on the open interval (0, 1) times
/// `n_theta` equally spaced angles.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadratureRule {
    pub n_r: usize,
    pub n_theta: usize,
}

impl Default for QuadratureRule {
    fn default() -> Self {
        Self { n_r: 32, n_theta: 256 }
    }
}

/// Expanded nodes of a [`QuadratureRule`]; weights already carry the polar
/// Jacobian `r`.
#[derive(Clone, Debug)]
pub struct DiskRule {
    pub radii: Vec<f64>,
    /// Radial weight including the Jacobian and the angular step.
    pub radial_weights: Vec<f64>,
    pub angles: Vec<Complex64>,
}

impl DiskRule {
    pub fn new(rule: QuadratureRule) -> Result<Self> {
        if rule.n_r == 0 || rule.n_theta == 0 {
            return Err(Error::InvalidParameter(
                "quadrature rule needs at least one node per axis".into(),
            ));
        }
        let (x, w) = gauss_legendre(rule.n_r);
        let dtheta = TAU / rule.n_theta as f64;
        let radii: Vec<f64> = x.iter().map(|&x| 0.5 * (x + 1.0)).collect();
        let radial_weights = radii.iter().zip(&w).map(|(&r, &w)| 0.5 * w * r * dtheta).collect();
        // Half-step offset keeps nodes off the real axis, where the built-in
        // singular test functions put their boundary singularities.
        let angles = (0..rule.n_theta)
            .map(|j| Complex64::from_polar(1.0, (j as f64 + 0.5) * dtheta))
            .collect();
        Ok(Self {
            radii,
            radial_weights,
            angles,
        })
    }

    pub fn len(&self) -> usize {
        self.radii.len() * self.angles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Visit every node with its weight.
    pub fn for_each(&self, mut f: impl FnMut(usize, Complex64, f64)) {
        for (i, (&r, &w)) in self.radii.iter().zip(&self.radial_weights).enumerate() {
            for &u in &self.angles {
                f(i, u * r, w);
            }
        }
    }
}

/// Approximate `∫_𝔻 g dA` with the given product rule.
pub fn disk_quadrature(g: impl Fn(Complex64) -> f64, rule: QuadratureRule) -> Result<f64> {
    let disk = DiskRule::new(rule)?;
    integrate(&disk, g)
}

pub(crate) fn integrate(disk: &DiskRule, g: impl Fn(Complex64) -> f64) -> Result<f64> {
    let mut total = 0.0;
    let mut bad = None;
    disk.for_each(|_, z, w| {
        let v = g(z);
        if !v.is_finite() && bad.is_none() {
            bad = Some(z);
        }
        total += w * v;
    });
    match bad {
        Some(z) => Err(Error::SingularNode { node: format!("{z}") }),
        None => Ok(total),
    }
}
