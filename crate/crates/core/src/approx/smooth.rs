//! Little-space approximants of Hölder samples: McShane extension to a
//! padded box, convolution with the Poisson kernel `P_t`, smooth cutoff.

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::funcrep::EuclideanSamples;

#[derive(Clone, Debug, PartialEq)]
pub struct SmoothOptions {
    /// Padding width as a multiple of the domain diameter.
    pub padding_factor: f64,
    /// Hölder constant used by the extension; the exact grid constant of the
    /// input when `None`.
    pub lambda: Option<f64>,
}

impl Default for SmoothOptions {
    fn default() -> Self {
        Self {
            padding_factor: 4.0,
            lambda: None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Smoothed {
    pub samples: EuclideanSamples,
    /// Continuum mass of `P_t` outside the truncation radius.
    pub truncation_mass: f64,
    pub lambda: f64,
}

/// `max_i |b_i − a_i|`, written so the loop vectorizes.
fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    let mut acc = [0.0f64; 8];
    let (ca, cb) = (a.chunks_exact(8), b.chunks_exact(8));
    let (ra, rb) = (ca.remainder(), cb.remainder());
    for (x, y) in ca.zip(cb) {
        for k in 0..8 {
            let d = (y[k] - x[k]).abs();
            acc[k] = if d > acc[k] { d } else { acc[k] };
        }
    }
    let tail = ra.iter().zip(rb).map(|(x, y)| (y - x).abs());
    acc.into_iter().chain(tail).fold(0.0, f64::max)
}

/// Exact `max |f(x) − f(y)| / |x − y|^α` over all node pairs.
pub fn lip_constant(f: &EuclideanSamples) -> f64 {
    let grid = f.grid();
    let v = f.values();
    let h = grid.step();
    let alpha = f.alpha();
    if grid.dim() == 1 {
        let n = v.len();
        let (lo, hi) = v
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, u), &x| (l.min(x), u.max(x)));
        let range = hi - lo;
        let mut best = 0.0f64;
        let mut d0 = 1;
        // offsets in blocks; no offset past `d` can beat `range / (dh)^α`
        while d0 < n && range / (d0 as f64 * h).powf(alpha) > best {
            let d1 = (d0 + 256).min(n);
            let block = (d0..d1)
                .into_par_iter()
                .map(|d| max_abs_diff(&v[..n - d], &v[d..]) / (d as f64 * h).powf(alpha))
                .reduce(|| 0.0, f64::max);
            best = best.max(block);
            d0 = d1;
        }
        return best;
    }
    let (nx, ny) = (grid.nodes[0], grid.nodes[1]);
    (0..nx)
        .into_par_iter()
        .map(|dx| {
            let lo = if dx == 0 { 1 } else { -(ny as isize - 1) };
            let mut best = 0.0f64;
            for dy in lo..ny as isize {
                let (y0, y1) = if dy < 0 {
                    ((-dy) as usize, ny)
                } else {
                    (0, ny - dy as usize)
                };
                let mut m = 0.0f64;
                for x in 0..nx - dx {
                    let row = &v[x * ny..(x + 1) * ny];
                    let other = &v[(x + dx) * ny..(x + dx + 1) * ny];
                    for y in y0..y1 {
                        m = m.max((other[(y as isize + dy) as usize] - row[y]).abs());
                    }
                }
                let dist = h * ((dx * dx) as f64 + (dy * dy) as f64).sqrt();
                best = best.max(m / dist.powf(alpha));
            }
            best
        })
        .reduce(|| 0.0, f64::max)
}

/// `min_j (f_j + λ((n − 1 − j + k)h)^α)` for `k = 1..=p`, the McShane
/// extension past the right end. The cost matrix is inverse Monge (`s^α`
/// is concave), so the smallest argmin is non-increasing in `k` and a
/// divide-and-conquer sweep finds every row minimum exactly.
fn extend_right(values: &[f64], p: usize, h: f64, lambda: f64, alpha: f64) -> Vec<f64> {
    let n = values.len();
    let cost = |k: usize, j: usize| values[j] + lambda * (((n - 1 - j + k) as f64) * h).powf(alpha);
    let mut out = vec![0.0; p];
    // explicit stack of (k_lo, k_hi, j_lo, j_hi), inclusive bounds
    let mut stack = vec![(1usize, p, 0usize, n - 1)];
    while let Some((klo, khi, jlo, jhi)) = stack.pop() {
        if klo > khi {
            continue;
        }
        let k = (klo + khi) / 2;
        let (mut best_j, mut best) = (jlo, cost(k, jlo));
        for j in jlo + 1..=jhi {
            let c = cost(k, j);
            if c < best {
                best = c;
                best_j = j;
            }
        }
        out[k - 1] = best;
        if k > klo {
            stack.push((klo, k - 1, best_j, jhi));
        }
        stack.push((k + 1, khi, jlo, best_j));
    }
    out
}

/// Smooth cutoff: 1 for `u ≤ 0`, 0 for `u ≥ 1`, `C^∞` in between.
fn cutoff(u: f64) -> f64 {
    if u <= 0.0 {
        return 1.0;
    }
    if u >= 1.0 {
        return 0.0;
    }
    let a = (-1.0 / (1.0 - u)).exp();
    let b = (-1.0 / u).exp();
    a / (a + b)
}

fn fft_len(n: usize) -> usize {
    n.next_power_of_two()
}

/// Circular convolution of `values` (zero-padded to a power of two) with the
/// discrete Poisson kernel `t/(t² + (mh)²)`, `|m| ≤ half`, normalized to
/// unit mass. Entries whose kernel window stays inside `values` are exact
/// linear convolutions.
pub fn poisson_convolve_1d(values: &[f64], h: f64, t: f64, half: usize) -> Vec<f64> {
    let len = fft_len(values.len().max(2 * half + 1));
    let mut kernel = vec![Complex64::new(0.0, 0.0); len];
    let mut mass = 0.0;
    for m in 0..=half {
        let x = m as f64 * h;
        let w = t / (t * t + x * x);
        kernel[m].re = w;
        mass += w;
        if m > 0 {
            kernel[len - m].re = w;
            mass += w;
        }
    }
    let mut buf: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    buf.resize(len, Complex64::new(0.0, 0.0));
    let mut planner = FftPlanner::new();
    let fwd = planner.plan_fft_forward(len);
    fwd.process(&mut kernel);
    fwd.process(&mut buf);
    let scale = 1.0 / (mass * len as f64);
    for (b, k) in buf.iter_mut().zip(&kernel) {
        *b *= k * scale;
    }
    planner.plan_fft_inverse(len).process(&mut buf);
    buf.truncate(values.len());
    buf.into_iter().map(|c| c.re).collect()
}

/// 2-D FFT of a row-major `rows × cols` buffer, in place.
fn fft2(buf: &mut [Complex64], rows: usize, cols: usize, inverse: bool) {
    let mut planner = FftPlanner::new();
    let (row_plan, col_plan) = if inverse {
        (planner.plan_fft_inverse(cols), planner.plan_fft_inverse(rows))
    } else {
        (planner.plan_fft_forward(cols), planner.plan_fft_forward(rows))
    };
    buf.chunks_mut(cols).for_each(|r| row_plan.process(r));
    let mut col = vec![Complex64::new(0.0, 0.0); rows];
    for c in 0..cols {
        for r in 0..rows {
            col[r] = buf[r * cols + c];
        }
        col_plan.process(&mut col);
        for r in 0..rows {
            buf[r * cols + c] = col[r];
        }
    }
}

/// Extension, mollification and cutoff of `f` at scale `t`.
pub fn lip_smooth(f: &EuclideanSamples, t: f64, options: &SmoothOptions) -> Result<Smoothed> {
    let alpha = f.alpha();
    if alpha >= 1.0 {
        return Err(Error::LittleSpaceTrivial);
    }
    let grid = f.grid();
    let h = grid.step();
    if !(t >= h * (1.0 - 1e-12)) {
        return Err(Error::KernelUnderResolved { t, step: h });
    }
    if !(options.padding_factor > 0.0 && options.padding_factor.is_finite()) {
        return Err(Error::InvalidParameter("padding factor must be positive".into()));
    }
    let lambda = options.lambda.unwrap_or_else(|| lip_constant(f));
    let p = ((options.padding_factor * grid.diameter()) / h).ceil() as usize;
    let width = p as f64 * h;
    let (values, truncation_mass) = if grid.dim() == 1 {
        let v = smooth_1d(f.values(), h, t, p, lambda, alpha);
        (v, 1.0 - (2.0 / std::f64::consts::PI) * (width / t).atan())
    } else {
        let v = smooth_2d(f.values(), [grid.nodes[0], grid.nodes[1]], h, t, p, lambda, alpha);
        (v, t / (t * t + width * width).sqrt())
    };
    Ok(Smoothed {
        samples: f.with_values(values),
        truncation_mass,
        lambda,
    })
}

fn smooth_1d(v: &[f64], h: f64, t: f64, p: usize, lambda: f64, alpha: f64) -> Vec<f64> {
    let n = v.len();
    let right = extend_right(v, p, h, lambda, alpha);
    let reversed: Vec<f64> = v.iter().rev().copied().collect();
    let left = extend_right(&reversed, p, h, lambda, alpha);
    let mut ext = Vec::with_capacity(n + 2 * p);
    ext.extend(left.iter().rev());
    ext.extend_from_slice(v);
    ext.extend(&right);
    let conv = poisson_convolve_1d(&ext, h, t, p);
    let width = p as f64 * h;
    (p..p + n)
        .map(|q| {
            let outside = (p.saturating_sub(q)).max(q.saturating_sub(p + n - 1));
            conv[q] * cutoff(outside as f64 * h / width)
        })
        .collect()
}

fn smooth_2d(v: &[f64], nodes: [usize; 2], h: f64, t: f64, p: usize, lambda: f64, alpha: f64) -> Vec<f64> {
    let [nx, ny] = nodes;
    let (px, py) = (nx + 2 * p, ny + 2 * p);
    // penalty λ|offset|^α by absolute lattice offset
    let table: Vec<f64> = (0..px * py)
        .map(|i| {
            let (dx, dy) = ((i / py) as f64, (i % py) as f64);
            lambda * (h * (dx * dx + dy * dy).sqrt()).powf(alpha)
        })
        .collect();
    let ext: Vec<f64> = (0..px * py)
        .into_par_iter()
        .map(|q| {
            let (x, y) = (q / py, q % py);
            let inside = (p..p + nx).contains(&x) && (p..p + ny).contains(&y);
            if inside {
                return v[(x - p) * ny + (y - p)];
            }
            let mut best = f64::INFINITY;
            for i in 0..nx {
                let dx = (x as isize - (i + p) as isize).unsigned_abs();
                let row = &table[dx * py..(dx + 1) * py];
                for j in 0..ny {
                    let dy = (y as isize - (j + p) as isize).unsigned_abs();
                    best = best.min(v[i * ny + j] + row[dy]);
                }
            }
            best
        })
        .collect();

    let (lx, ly) = (fft_len(px), fft_len(py));
    let mut kernel = vec![Complex64::new(0.0, 0.0); lx * ly];
    let mut mass = 0.0;
    let p_i = p as isize;
    for mx in -p_i..=p_i {
        for my in -p_i..=p_i {
            let r2 = ((mx * mx + my * my) as f64) * h * h;
            if r2 > (p as f64 * h).powi(2) {
                continue;
            }
            let w = t / (t * t + r2).powf(1.5);
            let (ix, iy) = (mx.rem_euclid(lx as isize) as usize, my.rem_euclid(ly as isize) as usize);
            kernel[ix * ly + iy].re = w;
            mass += w;
        }
    }
    let mut buf = vec![Complex64::new(0.0, 0.0); lx * ly];
    for x in 0..px {
        for y in 0..py {
            buf[x * ly + y].re = ext[x * py + y];
        }
    }
    fft2(&mut kernel, lx, ly, false);
    fft2(&mut buf, lx, ly, false);
    let scale = 1.0 / (mass * (lx * ly) as f64);
    for (b, k) in buf.iter_mut().zip(&kernel) {
        *b *= k * scale;
    }
    fft2(&mut buf, lx, ly, true);

    let width = p as f64 * h;
    let mut out = Vec::with_capacity(nx * ny);
    for i in 0..nx {
        for j in 0..ny {
            let (x, y) = (i + p, j + p);
            let ox = p.saturating_sub(x).max(x.saturating_sub(p + nx - 1));
            let oy = p.saturating_sub(y).max(y.saturating_sub(p + ny - 1));
            let d = ((ox * ox + oy * oy) as f64).sqrt() * h;
            out.push(buf[x * ly + y].re * cutoff(d / width));
        }
    }
    out
}
