use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::family::{FamilyEvaluator, OperatorParam};
use crate::funcrep::{Arc, ArcAverager, ArcSpan, FunctionData, PeriodicSamples};
use crate::spaces::SpaceTag;

/// Mean `p`-oscillation of `values` over a snapped arc whose average is `mean`.
pub(crate) fn span_oscillation(values: &[Complex64], span: ArcSpan, mean: Complex64, p: f64) -> f64 {
    let n = values.len();
    let end = span.start + span.cells;
    let (head, tail) = if end <= n {
        (&values[span.start..end], &values[..0])
    } else {
        (&values[span.start..], &values[..end - n])
    };
    let cells = span.cells as f64;
    let terms = head.iter().chain(tail);
    if p == 1.0 {
        terms.map(|v| (v - mean).norm()).sum::<f64>() / cells
    } else if p == 2.0 {
        (terms.map(|v| (v - mean).norm_sqr()).sum::<f64>() / cells).sqrt()
    } else {
        (terms.map(|v| (v - mean).norm().powf(p)).sum::<f64>() / cells).powf(1.0 / p)
    }
}

/// `((1/|I|) ∫_I |f − f_I|^p)^{1/p}` on the node set of `I`.
pub fn bmo_oscillation(f: &PeriodicSamples, arc: &Arc, p: f64) -> Result<f64> {
    if !(p >= 1.0 && p.is_finite()) {
        return Err(Error::InvalidParameter(format!("p must lie in [1, ∞), got {p}")));
    }
    let span = arc.snap(f.len())?;
    let mean = ArcAverager::new(f.values()).average(span);
    Ok(span_oscillation(f.values(), span, mean, p))
}

/// Arcs of the circle, remoteness `|I|`.
pub struct BmoFamily {
    arcs: Vec<Arc>,
    p: f64,
}

impl BmoFamily {
    pub fn new(arcs: Vec<Arc>, p: f64) -> Self {
        Self { arcs, p }
    }
}

impl FamilyEvaluator for BmoFamily {
    fn space(&self) -> SpaceTag {
        SpaceTag::BmoCircle
    }

    fn len(&self) -> usize {
        self.arcs.len()
    }

    fn remoteness(&self) -> Vec<f64> {
        self.arcs.iter().map(|a| a.length).collect()
    }

    fn param(&self, index: usize) -> OperatorParam {
        let a = self.arcs[index];
        OperatorParam::Arc {
            midpoint: a.midpoint,
            length: a.length,
        }
    }

    fn evaluate(&self, f: &FunctionData) -> Result<Vec<f64>> {
        let f = f.as_periodic()?;
        let n = f.len();
        let spans = self.arcs.iter().map(|a| a.snap(n)).collect::<Result<Vec<_>>>()?;
        let averager = ArcAverager::new(f.values());
        Ok(spans
            .par_iter()
            .map(|&s| span_oscillation(f.values(), s, averager.average(s), self.p))
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::{PI, TAU};

    fn step_half(n: usize) -> PeriodicSamples {
        PeriodicSamples::from_real_fn(n, |t| if t < PI { 1.0 } else { 0.0 }).unwrap()
    }

    #[test]
    fn constant_has_no_oscillation() {
        let f = PeriodicSamples::from_real_fn(256, |_| 2.5).unwrap();
        for p in [1.0, 2.0, 3.5] {
            assert!(bmo_oscillation(&f, &Arc::new(1.0, 0.7).unwrap(), p).unwrap() < 1e-15);
        }
    }

    #[test]
    fn half_straddled_jump() {
        let f = step_half(1024);
        // an even number of cells, centred on the jump at π
        let arc = Arc::new(PI, 160.0 * TAU / 1024.0).unwrap();
        let got1 = bmo_oscillation(&f, &arc, 1.0).unwrap();
        let got2 = bmo_oscillation(&f, &arc, 2.0).unwrap();
        assert!((got1 - 0.5).abs() < 1e-12, "{got1}");
        assert!((got2 - 0.5).abs() < 1e-12, "{got2}");
    }

    #[test]
    fn under_resolved_arc() {
        let f = step_half(64);
        assert!(matches!(
            bmo_oscillation(&f, &Arc::new(0.0, 0.05).unwrap(), 1.0),
            Err(Error::ArcUnderResolved { .. })
        ));
    }

    proptest! {
        #[test]
        fn rotation_invariance(shift in 0usize..256, mid in 0.0f64..TAU, len in 0.1f64..TAU, p in 1.0f64..4.0) {
            let n = 256;
            let f = PeriodicSamples::from_real_fn(n, |t| (3.0 * t).sin() + (t * 0.5).cos().abs()).unwrap();
            let arc = Arc::new(mid, len).unwrap();
            let rotated = f.rotate(shift);
            let moved = Arc::new(mid + TAU * shift as f64 / n as f64, len).unwrap();
            let a = bmo_oscillation(&f, &arc, p).unwrap();
            let b = bmo_oscillation(&rotated, &moved, p).unwrap();
            prop_assert!((a - b).abs() < 1e-12);
        }

        #[test]
        fn absolutely_homogeneous(c in -5.0f64..5.0, mid in 0.0f64..TAU, len in 0.1f64..TAU) {
            let f = PeriodicSamples::from_real_fn(128, |t| t.sin().powi(3) + 0.2 * t.cos()).unwrap();
            let cf = PeriodicSamples::new(f.values().iter().map(|v| v * c).collect()).unwrap();
            let arc = Arc::new(mid, len).unwrap();
            for p in [1.0, 2.0, 2.5] {
                let a = bmo_oscillation(&f, &arc, p).unwrap();
                let b = bmo_oscillation(&cf, &arc, p).unwrap();
                prop_assert!((b - c.abs() * a).abs() < 1e-12 * (1.0 + a));
            }
        }
    }
}
