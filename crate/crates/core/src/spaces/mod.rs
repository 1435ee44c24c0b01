//! The six concrete spaces: local evaluators `‖Lf‖_Y` and the discretized
//! operator families with their remoteness maps.

mod bloch;
mod bmo;
mod lip;
mod qk;
mod rect;
mod weighted;

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::family::OperatorFamilyGrid;
use crate::funcrep::{disk_quadrature, AmbientNorm, Arc, FunctionData, GridBox, QuadratureRule};

pub use bloch::{bloch_term, BlochFamily};
pub use bmo::{bmo_oscillation, BmoFamily};
pub use lip::{lip_quotient, LipFamily};
pub use qk::{qk_local, QkFamily};
pub use rect::{rect_oscillation, RectFamily};
pub use weighted::{weighted_term, WeightedFamily};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpaceTag {
    BmoCircle,
    Bloch,
    Qk,
    Weighted,
    Lip,
    RectBmo,
}

impl SpaceTag {
    pub fn name(self) -> &'static str {
        match self {
            SpaceTag::BmoCircle => "bmo_circle",
            SpaceTag::Bloch => "bloch",
            SpaceTag::Qk => "qk",
            SpaceTag::Weighted => "weighted",
            SpaceTag::Lip => "lip",
            SpaceTag::RectBmo => "rect_bmo",
        }
    }
}

/// The kernel `K` of a `Q_K` space.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum KKernel {
    /// `K(t) = t^exponent`.
    Power { exponent: f64 },
    /// `K ≡ 1`; gives the Dirichlet integral. Meant for tests.
    Constant,
}

impl Default for KKernel {
    fn default() -> Self {
        KKernel::Power { exponent: 1.0 }
    }
}

impl KKernel {
    pub fn name(&self) -> &'static str {
        match self {
            KKernel::Power { .. } => "power",
            KKernel::Constant => "constant",
        }
    }

    #[inline]
    pub fn eval(&self, t: f64) -> f64 {
        match *self {
            KKernel::Power { exponent } => t.powf(exponent),
            KKernel::Constant => 1.0,
        }
    }

    /// Sampled check of the kernel axioms plus integrability of
    /// `K(log 1/|z|)` on the disc.
    pub fn check(&self) -> Result<()> {
        if let KKernel::Power { exponent } = *self {
            if !(exponent > 0.0 && exponent.is_finite()) {
                return Err(Error::InvalidParameter(format!(
                    "K(t) = t^p needs p > 0, got {exponent}"
                )));
            }
        }
        let samples: Vec<f64> = (0..200).map(|i| self.eval(1e-6 * 1.1f64.powi(i))).collect();
        if samples.iter().any(|v| !(*v >= 0.0 && v.is_finite())) {
            return Err(Error::InvalidParameter("K must be non-negative and finite".into()));
        }
        if samples.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::InvalidParameter("K must be non-decreasing".into()));
        }
        if samples.iter().all(|v| *v == 0.0) {
            return Err(Error::InvalidParameter("K must not vanish identically".into()));
        }
        let mass = disk_quadrature(|z| self.eval((1.0 / z.norm()).ln()), QuadratureRule::default())?;
        if !mass.is_finite() {
            return Err(Error::InvalidParameter("K(log 1/|z|) is not integrable".into()));
        }
        Ok(())
    }
}

/// A subdomain Ω of the closed unit disc.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum Domain {
    Disc { radius: f64 },
    Annulus { inner: f64, outer: f64 },
}

impl Default for Domain {
    fn default() -> Self {
        Domain::Disc { radius: 1.0 }
    }
}

impl Domain {
    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            Domain::Disc { radius } => radius > 0.0 && radius <= 1.0,
            Domain::Annulus { inner, outer } => inner > 0.0 && inner < outer && outer <= 1.0,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!(
                "domain {self:?} must lie in the unit disc"
            )))
        }
    }

    pub fn outer_radius(&self) -> f64 {
        match *self {
            Domain::Disc { radius } => radius,
            Domain::Annulus { outer, .. } => outer,
        }
    }

    pub fn contains(&self, z: Complex64) -> bool {
        let m = z.norm();
        match *self {
            Domain::Disc { radius } => m < radius,
            Domain::Annulus { inner, outer } => m > inner && m < outer,
        }
    }

    pub fn boundary_distance(&self, z: Complex64) -> f64 {
        let m = z.norm();
        match *self {
            Domain::Disc { radius } => radius - m,
            Domain::Annulus { inner, outer } => (outer - m).min(m - inner),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum WeightKind {
    /// `v(z) = (1 − |z|²)^exponent`.
    OneMinusR2 {
        #[serde(default = "one")]
        exponent: f64,
    },
    /// `v(z) = dist(z, ∂Ω)^exponent`.
    BoundaryDistance {
        #[serde(default = "one")]
        exponent: f64,
    },
}

impl Default for WeightKind {
    fn default() -> Self {
        WeightKind::OneMinusR2 { exponent: 1.0 }
    }
}

fn one() -> f64 {
    1.0
}

/// A positive continuous weight `v` on Ω.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightV {
    pub kind: WeightKind,
    pub domain: Domain,
}

impl WeightV {
    pub fn new(kind: WeightKind, domain: Domain) -> Result<Self> {
        domain.validate()?;
        let exponent = match kind {
            WeightKind::OneMinusR2 { exponent } | WeightKind::BoundaryDistance { exponent } => exponent,
        };
        if !(exponent > 0.0 && exponent.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "weight exponent must be positive, got {exponent}"
            )));
        }
        Ok(Self { kind, domain })
    }

    #[inline]
    pub fn eval(&self, z: Complex64) -> f64 {
        match self.kind {
            WeightKind::OneMinusR2 { exponent } => (1.0 - z.norm_sqr()).powf(exponent),
            WeightKind::BoundaryDistance { exponent } => self.domain.boundary_distance(z).powf(exponent),
        }
    }

    /// `min(dist(z, ∂Ω), 1/(1 + |z|))`.
    pub fn boundary_remoteness(&self, z: Complex64) -> f64 {
        self.domain.boundary_distance(z).min(1.0 / (1.0 + z.norm()))
    }
}

/// Per-space parameters, tagged by `"space"`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "space", rename_all = "snake_case")]
pub enum SpaceParams {
    BmoCircle {
        #[serde(default = "one")]
        p: f64,
    },
    Bloch {},
    Qk {
        #[serde(rename = "K", default)]
        kernel: KKernel,
    },
    Weighted {
        #[serde(default)]
        weight: WeightKind,
        #[serde(default)]
        domain: Domain,
    },
    Lip {
        alpha: f64,
    },
    RectBmo {},
}

/// Grid sizes and ladder settings. Unset fields take per-space defaults.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Resolution {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub midpoints: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lengths: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shells: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub angles: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub include_origin: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quadrature: Option<QuadratureRule>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridBox>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pair_cap: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tail_levels: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub allowance: Option<f64>,
}

/// A space together with the resolution of its operator grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpaceDescriptor {
    #[serde(flatten)]
    pub params: SpaceParams,
    #[serde(default)]
    pub resolution: Resolution,
}

impl SpaceDescriptor {
    pub fn new(params: SpaceParams) -> Self {
        Self {
            params,
            resolution: Resolution::default(),
        }
    }

    pub fn bmo(p: f64) -> Self {
        Self::new(SpaceParams::BmoCircle { p })
    }

    pub fn bloch() -> Self {
        Self::new(SpaceParams::Bloch {})
    }

    pub fn qk(kernel: KKernel) -> Self {
        Self::new(SpaceParams::Qk { kernel })
    }

    pub fn weighted(weight: WeightKind, domain: Domain) -> Self {
        Self::new(SpaceParams::Weighted { weight, domain })
    }

    pub fn lip(alpha: f64) -> Self {
        Self::new(SpaceParams::Lip { alpha })
    }

    pub fn rect_bmo() -> Self {
        Self::new(SpaceParams::RectBmo {})
    }

    pub fn with_resolution(mut self, resolution: Resolution) -> Self {
        self.resolution = resolution;
        self
    }

    pub fn tag(&self) -> SpaceTag {
        match self.params {
            SpaceParams::BmoCircle { .. } => SpaceTag::BmoCircle,
            SpaceParams::Bloch {} => SpaceTag::Bloch,
            SpaceParams::Qk { .. } => SpaceTag::Qk,
            SpaceParams::Weighted { .. } => SpaceTag::Weighted,
            SpaceParams::Lip { .. } => SpaceTag::Lip,
            SpaceParams::RectBmo {} => SpaceTag::RectBmo,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match &self.params {
            SpaceParams::BmoCircle { p } => {
                if !(*p >= 1.0 && p.is_finite()) {
                    return Err(Error::InvalidParameter(format!("p must lie in [1, ∞), got {p}")));
                }
            }
            SpaceParams::Qk { kernel } => kernel.check()?,
            SpaceParams::Weighted { weight, domain } => {
                WeightV::new(*weight, *domain)?;
            }
            SpaceParams::Lip { alpha } => {
                if !(*alpha > 0.0 && *alpha <= 1.0) {
                    return Err(Error::InvalidParameter(format!(
                        "alpha must lie in (0, 1], got {alpha}"
                    )));
                }
            }
            SpaceParams::Bloch {} | SpaceParams::RectBmo {} => {}
        }
        if let Some(a) = self.resolution.allowance {
            if !(a >= 0.0) {
                return Err(Error::InvalidParameter("allowance must be non-negative".into()));
            }
        }
        if let Some(g) = &self.resolution.grid {
            g.validate()?;
        }
        Ok(())
    }

    /// Weight of the weighted space; `None` for the others.
    pub fn weight(&self) -> Option<WeightV> {
        match self.params {
            SpaceParams::Weighted { weight, domain } => Some(WeightV { kind: weight, domain }),
            _ => None,
        }
    }

    /// Quadrature rule used by the `Q_K` evaluator and the weighted X-norm.
    pub fn quadrature(&self) -> QuadratureRule {
        self.resolution.quadrature.unwrap_or(match self.params {
            SpaceParams::Weighted { .. } => QuadratureRule { n_r: 64, n_theta: 256 },
            _ => QuadratureRule::default(),
        })
    }

    /// Lattice size for circle samples the space expects (BMO and rect BMO).
    pub fn samples(&self) -> usize {
        self.resolution.samples.unwrap_or(match self.params {
            SpaceParams::RectBmo {} => 128,
            _ => 4096,
        })
    }

    pub fn ambient_norm(&self) -> AmbientNorm {
        match self.params {
            SpaceParams::BmoCircle { .. } => AmbientNorm::L2Circle,
            SpaceParams::Bloch {} => AmbientNorm::Bergman,
            SpaceParams::Qk { .. } => AmbientNorm::Hardy,
            SpaceParams::Weighted { weight, domain } => AmbientNorm::WeightedL2 {
                weight: WeightV { kind: weight, domain },
                rule: self.quadrature(),
            },
            SpaceParams::Lip { .. } => AmbientNorm::Sup,
            SpaceParams::RectBmo {} => AmbientNorm::L2Torus,
        }
    }

    fn allowance(&self) -> f64 {
        self.resolution.allowance.unwrap_or(0.02)
    }

    fn tail_levels(&self) -> usize {
        self.resolution.tail_levels.unwrap_or(10)
    }

    /// Default Lip grid: `[−1, 1]` with 1025 nodes.
    pub fn lip_grid(&self) -> Result<GridBox> {
        match &self.resolution.grid {
            Some(g) => Ok(g.clone()),
            None => GridBox::interval(-1.0, 1.0, 1025),
        }
    }
}

/// Dyadic arc lengths `2π·2^{-k}`, `k = 0..count`, and `midpoints` uniform
/// midpoints.
fn dyadic_arcs(midpoints: usize, lengths: usize) -> Result<Vec<Arc>> {
    if midpoints == 0 || lengths == 0 {
        return Err(Error::EmptyGrid);
    }
    let mut arcs = Vec::with_capacity(midpoints * lengths);
    for k in 0..lengths {
        let len = TAU * 2f64.powi(-(k as i32));
        for j in 0..midpoints {
            arcs.push(Arc::new(TAU * j as f64 / midpoints as f64, len)?);
        }
    }
    Ok(arcs)
}

/// Points of the disc of radius `scale`: optional origin, then shells at
/// `scale·(1 − 2^{-k})`, `k = 1..=shells`, each with `angles` points.
fn shell_points(shells: usize, angles: usize, include_origin: bool, scale: f64) -> Vec<Complex64> {
    let mut pts = Vec::with_capacity(shells * angles + 1);
    if include_origin {
        pts.push(Complex64::new(0.0, 0.0));
    }
    for k in 1..=shells {
        let r = scale * (1.0 - 2f64.powi(-(k as i32)));
        for j in 0..angles {
            pts.push(Complex64::from_polar(r, TAU * j as f64 / angles as f64));
        }
    }
    pts
}

/// Discretize the space's operator family.
pub fn build_family(desc: &SpaceDescriptor) -> Result<OperatorFamilyGrid> {
    desc.validate()?;
    let res = &desc.resolution;
    let origin = res.include_origin.unwrap_or(true);
    let evaluator: Box<dyn crate::family::FamilyEvaluator> = match &desc.params {
        SpaceParams::BmoCircle { p } => Box::new(BmoFamily::new(
            dyadic_arcs(res.midpoints.unwrap_or(256), res.lengths.unwrap_or(11))?,
            *p,
        )),
        SpaceParams::Bloch {} => Box::new(BlochFamily::new(shell_points(
            res.shells.unwrap_or(12),
            res.angles.unwrap_or(256),
            origin,
            1.0,
        ))),
        SpaceParams::Qk { kernel } => Box::new(QkFamily::new(
            shell_points(res.shells.unwrap_or(6), res.angles.unwrap_or(64), origin, 1.0),
            kernel.clone(),
            desc.quadrature(),
        )?),
        SpaceParams::Weighted { weight, domain } => {
            let v = WeightV::new(*weight, *domain)?;
            Box::new(WeightedFamily::new(
                weighted::domain_points(domain, res.shells.unwrap_or(12), res.angles.unwrap_or(256), origin),
                v,
            ))
        }
        SpaceParams::Lip { alpha } => Box::new(LipFamily::new(
            desc.lip_grid()?,
            *alpha,
            res.pair_cap.unwrap_or(1_000_000),
        )?),
        SpaceParams::RectBmo {} => {
            let arcs = dyadic_arcs(res.midpoints.unwrap_or(16), res.lengths.unwrap_or(7))?;
            Box::new(RectFamily::new(arcs.clone(), arcs))
        }
    };
    OperatorFamilyGrid::new(evaluator, desc.allowance(), desc.tail_levels())
}

/// As [`build_family`], but a Lip space without an explicit grid adopts the
/// grid of `f`.
pub fn build_family_for(desc: &SpaceDescriptor, f: &FunctionData) -> Result<OperatorFamilyGrid> {
    match (&desc.params, &desc.resolution.grid, f) {
        (SpaceParams::Lip { .. }, None, FunctionData::Euclidean(s)) => {
            let mut d = desc.clone();
            d.resolution.grid = Some(s.grid().clone());
            build_family(&d)
        }
        _ => build_family(desc),
    }
}
