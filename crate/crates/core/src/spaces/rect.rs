use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::Result;
use crate::family::{FamilyEvaluator, OperatorParam};
use crate::funcrep::{Arc, ArcAverager, ArcSpan, FunctionData, TorusSamples};
use crate::spaces::SpaceTag;

/// Row and column averagers of a torus grid.
struct Marginals {
    rows: Vec<ArcAverager>,
    cols: Vec<ArcAverager>,
}

impl Marginals {
    fn new(f: &TorusSamples) -> Self {
        let n = f.n();
        let rows = f.values().chunks(n).map(ArcAverager::new).collect();
        let cols = (0..n)
            .map(|k| {
                let col: Vec<Complex64> = (0..n).map(|j| f.at(j, k)).collect();
                ArcAverager::new(&col)
            })
            .collect();
        Self { rows, cols }
    }

    fn oscillation(&self, f: &TorusSamples, si: ArcSpan, sj: ArcSpan) -> f64 {
        let n = f.n();
        // F_J(ζ_j) for j ∈ I and F_I(λ_k) for k ∈ J
        let row_means: Vec<Complex64> = si.indices(n).map(|j| self.rows[j].average(sj)).collect();
        let col_means: Vec<Complex64> = sj.indices(n).map(|k| self.cols[k].average(si)).collect();
        let both = row_means.iter().sum::<Complex64>() / row_means.len() as f64;
        let mut ss = 0.0;
        for (j, fj) in si.indices(n).zip(&row_means) {
            let row = &f.values()[j * n..(j + 1) * n];
            for (k, fi) in sj.indices(n).zip(&col_means) {
                ss += (row[k] - fj - fi + both).norm_sqr();
            }
        }
        (ss / (si.cells * sj.cells) as f64).sqrt()
    }
}

/// `((1/(|I||J|)) ∬_{I×J} |F − F_J − F_I + F_{I×J}|²)^{1/2}`, where `F_J`
/// averages over the second variable, `F_I` over the first.
pub fn rect_oscillation(f: &TorusSamples, i: &Arc, j: &Arc) -> Result<f64> {
    let (si, sj) = (i.snap(f.n())?, j.snap(f.n())?);
    Ok(Marginals::new(f).oscillation(f, si, sj))
}

/// Rectangles `I × J`, remoteness `min(|I|, |J|)`.
pub struct RectFamily {
    rects: Vec<(Arc, Arc)>,
}

impl RectFamily {
    pub fn new(first: Vec<Arc>, second: Vec<Arc>) -> Self {
        let rects = first
            .iter()
            .flat_map(|&i| second.iter().map(move |&j| (i, j)))
            .collect();
        Self { rects }
    }
}

impl FamilyEvaluator for RectFamily {
    fn space(&self) -> SpaceTag {
        SpaceTag::RectBmo
    }

    fn len(&self) -> usize {
        self.rects.len()
    }

    fn remoteness(&self) -> Vec<f64> {
        self.rects.iter().map(|(i, j)| i.length.min(j.length)).collect()
    }

    fn param(&self, index: usize) -> OperatorParam {
        let (first, second) = self.rects[index];
        OperatorParam::Rectangle { first, second }
    }

    fn evaluate(&self, f: &FunctionData) -> Result<Vec<f64>> {
        let f = f.as_torus()?;
        let spans = self
            .rects
            .iter()
            .map(|(i, j)| Ok((i.snap(f.n())?, j.snap(f.n())?)))
            .collect::<Result<Vec<_>>>()?;
        let m = Marginals::new(f);
        Ok(spans.par_iter().map(|&(si, sj)| m.oscillation(f, si, sj)).collect())
    }
}
