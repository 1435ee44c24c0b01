use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::family::{FamilyEvaluator, OperatorParam};
use crate::funcrep::{EuclideanSamples, FunctionData, GridBox};
use crate::spaces::SpaceTag;

/// `|f(x) − f(y)| / |x − y|^α` for flat node indices `x ≠ y`.
pub fn lip_quotient(f: &EuclideanSamples, x: usize, y: usize, alpha: f64) -> Result<f64> {
    let n = f.values().len();
    if x == y || x >= n || y >= n {
        return Err(Error::InvalidParameter(format!(
            "need two distinct nodes below {n}, got {x} and {y}"
        )));
    }
    let d = f.grid().distance(x, y);
    Ok((f.values()[x] - f.values()[y]).abs() / d.powf(alpha))
}

/// A lattice offset between two nodes and how many node pairs realise it.
struct Offset {
    dx: usize,
    dy: isize,
    count: usize,
}

/// Canonical offsets (one per ± pair) grouped into dyadic distance bands
/// `2^b ≤ |offset| / h < 2^{b+1}`.
fn offset_bands(grid: &GridBox) -> Vec<Vec<Offset>> {
    let (nx, ny) = match grid.dim() {
        1 => (grid.nodes[0], 1),
        _ => (grid.nodes[0], grid.nodes[1]),
    };
    let mut bands: Vec<Vec<Offset>> = Vec::new();
    for dx in 0..nx {
        let lo = if dx == 0 { 1 } else { -(ny as isize - 1) };
        for dy in lo..ny as isize {
            let len_sq = (dx * dx) as f64 + (dy * dy) as f64;
            let band = (0.5 * len_sq.log2() + 1e-12).floor() as usize;
            if bands.len() <= band {
                bands.resize_with(band + 1, Vec::new);
            }
            bands[band].push(Offset {
                dx,
                dy,
                count: (nx - dx) * (ny - dy.unsigned_abs()),
            });
        }
    }
    bands
}

/// Node pairs stratified by distance band. Bands are filled finest first;
/// a band over its share of the cap keeps every `s`-th base node per offset,
/// `s` the smallest power of two that fits.
fn stratified_pairs(grid: &GridBox, cap: usize) -> Vec<(u32, u32)> {
    let ny = if grid.dim() == 1 { 1 } else { grid.nodes[1] };
    let bands = offset_bands(grid);
    let mut pairs = Vec::new();
    let mut remaining = cap;
    for (b, band) in bands.iter().enumerate() {
        let quota = (remaining / (bands.len() - b)).max(1);
        let kept = |s: usize| band.iter().map(|o| o.count.div_ceil(s)).sum::<usize>();
        let mut stride = 1;
        while kept(stride) > quota {
            stride *= 2;
        }
        for o in band {
            let abs_dy = o.dy.unsigned_abs();
            let len_y = ny - abs_dy;
            let y_min = if o.dy < 0 { abs_dy } else { 0 };
            for l in (0..o.count).step_by(stride) {
                let (bx, by) = (l / len_y, y_min + l % len_y);
                let i = bx * ny + by;
                let j = (bx + o.dx) * ny + (by as isize + o.dy) as usize;
                pairs.push((i as u32, j as u32));
            }
        }
        remaining = remaining.saturating_sub(kept(stride));
    }
    pairs
}

/// Node pairs of a grid, remoteness `|x − y|`.
pub struct LipFamily {
    grid: GridBox,
    pairs: Vec<(u32, u32)>,
    distances: Vec<f64>,
    denominators: Vec<f64>,
}

impl LipFamily {
    pub fn new(grid: GridBox, alpha: f64, pair_cap: usize) -> Result<Self> {
        grid.validate()?;
        if grid.len() > u32::MAX as usize {
            return Err(Error::InvalidParameter("grid too large".into()));
        }
        if pair_cap == 0 {
            return Err(Error::EmptyGrid);
        }
        let pairs = stratified_pairs(&grid, pair_cap);
        let distances: Vec<f64> = pairs
            .iter()
            .map(|&(i, j)| grid.distance(i as usize, j as usize))
            .collect();
        let denominators = distances.iter().map(|d| d.powf(alpha)).collect();
        Ok(Self {
            grid,
            pairs,
            distances,
            denominators,
        })
    }

    pub fn grid(&self) -> &GridBox {
        &self.grid
    }
}

impl FamilyEvaluator for LipFamily {
    fn space(&self) -> SpaceTag {
        SpaceTag::Lip
    }

    fn len(&self) -> usize {
        self.pairs.len()
    }

    fn remoteness(&self) -> Vec<f64> {
        self.distances.clone()
    }

    fn param(&self, index: usize) -> OperatorParam {
        let (i, j) = self.pairs[index];
        OperatorParam::Pair {
            x: self.grid.coords(i as usize),
            y: self.grid.coords(j as usize),
        }
    }

    fn evaluate(&self, f: &FunctionData) -> Result<Vec<f64>> {
        let f = f.as_euclidean()?;
        if f.grid() != &self.grid {
            return Err(Error::InvalidParameter(
                "sample grid differs from the family grid".into(),
            ));
        }
        let v = f.values();
        Ok(self
            .pairs
            .par_iter()
            .zip(&self.denominators)
            .map(|(&(i, j), &den)| (v[i as usize] - v[j as usize]).abs() / den)
            .collect())
    }
}
