//! Analytic functions on the unit disc given by Taylor coefficients, with
//! optional closed-form evaluators for series that converge too slowly to
//! sum near the boundary.

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::FftPlanner;

use super::mobius::Automorphism;
use crate::error::{Error, Result};

const TAIL_TOLERANCE: f64 = 1e-8;

fn one() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

/// Expression tree for closed-form evaluation of `f` and `f'`.
#[derive(Clone, Debug, PartialEq)]
pub enum ClosedForm {
    /// `log 1/(1 − z)`
    LogSingular,
    /// `1/(1 − z)`
    Cauchy,
    /// Exact polynomial, coefficient `k` multiplies `z^k`.
    Poly(Arc<[Complex64]>),
    Scaled(Complex64, Arc<ClosedForm>),
    /// `z ↦ g(s z)`
    Dilated(Complex64, Arc<ClosedForm>),
    Sum(Arc<ClosedForm>, Arc<ClosedForm>),
    /// `g∘φ − g(φ(0))`
    MobiusShift(Automorphism, Arc<ClosedForm>),
}

impl ClosedForm {
    pub fn value(&self, z: Complex64) -> Complex64 {
        match self {
            ClosedForm::LogSingular => -(one() - z).ln(),
            ClosedForm::Cauchy => one() / (one() - z),
            ClosedForm::Poly(c) => horner(c, z).0,
            ClosedForm::Scaled(c, g) => c * g.value(z),
            ClosedForm::Dilated(s, g) => g.value(s * z),
            ClosedForm::Sum(f, g) => f.value(z) + g.value(z),
            ClosedForm::MobiusShift(phi, g) => g.value(phi.eval(z).0) - g.value(phi.at_origin()),
        }
    }

    pub fn deriv(&self, z: Complex64) -> Complex64 {
        match self {
            ClosedForm::LogSingular => one() / (one() - z),
            ClosedForm::Cauchy => {
                let d = one() - z;
                one() / (d * d)
            }
            ClosedForm::Poly(c) => horner_deriv(c, z),
            ClosedForm::Scaled(c, g) => c * g.deriv(z),
            ClosedForm::Dilated(s, g) => s * g.deriv(s * z),
            ClosedForm::Sum(f, g) => f.deriv(z) + g.deriv(z),
            ClosedForm::MobiusShift(phi, g) => {
                let (w, dw) = phi.eval(z);
                g.deriv(w) * dw
            }
        }
    }
}

/// Value and derivative of `Σ c_k z^k`.
#[inline]
pub(crate) fn horner(c: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &ck in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + ck;
    }
    (p, dp)
}

/// `Σ k c_k z^{k−1}` alone, half the work of [`horner`].
pub(crate) fn horner_deriv(c: &[Complex64], z: Complex64) -> Complex64 {
    let mut dp = Complex64::new(0.0, 0.0);
    for (k, &ck) in c.iter().enumerate().skip(1).rev() {
        dp = dp * z + ck * k as f64;
    }
    dp
}

/// An analytic function on 𝔻.
///
/// `coeffs[k]` is the coefficient of `z^k`. The Möbius-invariant and Bloch
/// spaces only see `f'`, so a non-zero `coeffs[0]` is harmless there; the
/// weighted space needs it (e.g. `1/(1 − z)`).
#[derive(Clone, Debug, PartialEq)]
pub struct TaylorFunction {
    coeffs: Vec<Complex64>,
    complete: bool,
    closed_form: Option<ClosedForm>,
    radius_cap: f64,
}

impl TaylorFunction {
    /// A polynomial: the coefficient list is the whole series.
    pub fn polynomial(coeffs: Vec<Complex64>) -> Self {
        Self {
            coeffs,
            complete: true,
            closed_form: None,
            radius_cap: 1.0,
        }
    }

    pub fn monomial(degree: usize, c: Complex64) -> Self {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); degree + 1];
        coeffs[degree] = c;
        Self::polynomial(coeffs)
    }

    pub fn zero() -> Self {
        Self::polynomial(vec![Complex64::new(0.0, 0.0)])
    }

    /// A truncated series; evaluation is only trusted up to the radius where
    /// the geometric tail estimate stays below 1e-8.
    pub fn truncated(coeffs: Vec<Complex64>) -> Self {
        let radius_cap = tail_radius(&coeffs);
        Self {
            coeffs,
            complete: false,
            closed_form: None,
            radius_cap,
        }
    }

    /// Truncated coefficients plus an exact evaluator.
    pub fn with_closed_form(coeffs: Vec<Complex64>, closed_form: ClosedForm) -> Self {
        Self {
            closed_form: Some(closed_form),
            ..Self::truncated(coeffs)
        }
    }

    /// `log 1/(1 − z) = Σ z^k / k`, `terms` coefficients retained.
    pub fn log_singular(terms: usize) -> Self {
        let mut coeffs = vec![Complex64::new(0.0, 0.0)];
        coeffs.extend((1..=terms).map(|k| Complex64::new(1.0 / k as f64, 0.0)));
        Self::with_closed_form(coeffs, ClosedForm::LogSingular)
    }

    /// `1/(1 − z) = Σ z^k`, `terms` coefficients after the constant retained.
    pub fn cauchy_kernel(terms: usize) -> Self {
        let coeffs = vec![one(); terms + 1];
        Self::with_closed_form(coeffs, ClosedForm::Cauchy)
    }

    /// `Σ_{k=0}^{levels} z^{2^k}`.
    pub fn lacunary(levels: u32) -> Self {
        let degree = 1usize << levels;
        let mut coeffs = vec![Complex64::new(0.0, 0.0); degree + 1];
        for k in 0..=levels {
            coeffs[1usize << k] = one();
        }
        Self::polynomial(coeffs)
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Whether `coeffs` is the full series rather than a truncation.
    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn closed_form(&self) -> Option<&ClosedForm> {
        self.closed_form.as_ref()
    }

    pub fn radius_cap(&self) -> f64 {
        self.radius_cap
    }

    fn check_point(&self, w: Complex64) -> Result<()> {
        let m = w.norm();
        if !(m < 1.0) {
            return Err(Error::OutsideUnitDisc { modulus: m });
        }
        if self.closed_form.is_none() && !self.complete && m > self.radius_cap {
            return Err(Error::BeyondTrustedRadius {
                modulus: m,
                radius_cap: self.radius_cap,
            });
        }
        Ok(())
    }

    pub fn eval(&self, w: Complex64) -> Result<Complex64> {
        self.check_point(w)?;
        Ok(self.eval_unchecked(w))
    }

    /// `f'(w)`, preferring the closed form when there is one.
    pub fn eval_deriv(&self, w: Complex64) -> Result<Complex64> {
        self.check_point(w)?;
        Ok(self.deriv_unchecked(w))
    }

    /// Check once that every point of a closed disc of radius `r < 1` is
    /// evaluable, so hot loops can skip per-point checks.
    pub fn check_radius(&self, r: f64) -> Result<()> {
        self.check_point(Complex64::new(r, 0.0))
    }

    #[inline]
    pub(crate) fn eval_unchecked(&self, w: Complex64) -> Complex64 {
        match &self.closed_form {
            Some(cf) => cf.value(w),
            None => horner(&self.coeffs, w).0,
        }
    }

    #[inline]
    pub(crate) fn deriv_unchecked(&self, w: Complex64) -> Complex64 {
        match &self.closed_form {
            Some(cf) => cf.deriv(w),
            None => horner_deriv(&self.coeffs, w),
        }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
            complete: self.complete,
            closed_form: self
                .closed_form
                .as_ref()
                .map(|cf| ClosedForm::Scaled(c, Arc::new(cf.clone()))),
            radius_cap: self.radius_cap,
        }
    }

    fn as_closed_form(&self) -> Option<ClosedForm> {
        match &self.closed_form {
            Some(cf) => Some(cf.clone()),
            None if self.complete => Some(ClosedForm::Poly(self.coeffs.clone().into())),
            None => None,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let at = |c: &[Complex64], k: usize| c.get(k).copied().unwrap_or_default();
        let coeffs: Vec<Complex64> = (0..n).map(|k| at(&self.coeffs, k) + at(&other.coeffs, k)).collect();
        let complete = self.complete && other.complete;
        let closed_form = if self.closed_form.is_none() && other.closed_form.is_none() {
            None
        } else {
            match (self.as_closed_form(), other.as_closed_form()) {
                (Some(a), Some(b)) => Some(ClosedForm::Sum(Arc::new(a), Arc::new(b))),
                _ => None,
            }
        };
        let radius_cap = if complete {
            1.0
        } else {
            self.radius_cap.min(other.radius_cap)
        };
        Self {
            coeffs,
            complete,
            closed_form,
            radius_cap,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    /// `f_r(z) = f(rz)`.
    pub fn dilate(&self, r: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&r) {
            return Err(Error::InvalidParameter(format!(
                "dilation radius must lie in [0, 1], got {r}"
            )));
        }
        let mut power = 1.0;
        let coeffs = self
            .coeffs
            .iter()
            .map(|&a| {
                let v = a * power;
                power *= r;
                v
            })
            .collect();
        let closed_form = self
            .closed_form
            .as_ref()
            .map(|cf| ClosedForm::Dilated(Complex64::new(r, 0.0), Arc::new(cf.clone())));
        let radius_cap = if r > 0.0 { (self.radius_cap / r).min(1.0) } else { 1.0 };
        Ok(Self {
            coeffs,
            complete: self.complete,
            closed_form,
            radius_cap,
        })
    }

    /// Cesàro-damped partial sum `Σ_{k≤n} (1 − k/(n+1)) a_k z^k`.
    pub fn fejer(&self, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("Fejér order must be positive".into()));
        }
        let available = self.coeffs.len().saturating_sub(1);
        if !self.complete && available < n {
            return Err(Error::CoefficientsUnavailable {
                requested: n,
                available,
            });
        }
        let top = n.min(available);
        let scale = 1.0 / (n as f64 + 1.0);
        let coeffs = (0..=top).map(|k| self.coeffs[k] * (1.0 - k as f64 * scale)).collect();
        Ok(Self::polynomial(coeffs))
    }

    /// `f∘φ_{a,λ} − f(φ_{a,λ}(0))`.
    ///
    /// The result evaluates through a closed form; its Taylor coefficients are
    /// recovered by sampling on a circle.
    pub fn compose_mobius(&self, phi: Automorphism) -> Result<Self> {
        let inner = self.as_closed_form().ok_or_else(|| {
            Error::InvalidParameter("composition needs a closed form or a complete polynomial".into())
        })?;
        let cf = ClosedForm::MobiusShift(phi, Arc::new(inner));
        // f∘φ is analytic past the unit circle when f is a polynomial;
        // otherwise sample strictly inside.
        let radius = if self.closed_form.is_none() { 1.0 } else { 0.9 };
        let coeffs = series_from_samples(&cf, radius, 2048);
        Ok(Self::with_closed_form(coeffs, cf))
    }
}

/// Taylor coefficients of an evaluator by a DFT on the circle of the given
/// radius, keeping only the terms whose rescaling keeps them accurate.
fn series_from_samples(cf: &ClosedForm, radius: f64, n: usize) -> Vec<Complex64> {
    let mut buf: Vec<Complex64> = (0..n)
        .map(|j| {
            let z = Complex64::from_polar(radius, std::f64::consts::TAU * j as f64 / n as f64);
            cf.value(z)
        })
        .collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let keep = if radius >= 1.0 {
        n / 2
    } else {
        ((1e-10f64).ln() / radius.ln()).floor() as usize
    }
    .min(n / 2);
    let mut scale = 1.0 / n as f64;
    let mut out = Vec::with_capacity(keep);
    for c in buf.into_iter().take(keep) {
        out.push(c * scale);
        scale /= radius;
    }
    out
}

fn tail_radius(coeffs: &[Complex64]) -> f64 {
    let Some((n, last)) = coeffs
        .iter()
        .enumerate()
        .rev()
        .find(|(_, c)| c.norm() > 0.0)
        .map(|(k, c)| (k, c.norm()))
    else {
        return 1.0;
    };
    let bound = |r: f64| last * r.powi(n as i32 + 1) / (1.0 - r);
    if bound(0.0) > TAIL_TOLERANCE {
        return 0.0;
    }
    let (mut lo, mut hi) = (0.0, 1.0);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if bound(mid) <= TAIL_TOLERANCE {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}
