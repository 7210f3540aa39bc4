use serde::Serialize;

use super::grid::GridDomain;
use super::solver::MASolution;
use crate::error::{Error, Result};
use crate::projective::convex_hull;

/// Default number of gradient-grid points per axis.
pub const DEFAULT_RESOLUTION: usize = 65;

/// p(y) = sup_x (x·y − v(x)) on a regular grid in gradient space.
#[derive(Debug, Clone, Serialize)]
pub struct LegendreTransform {
    pub y_lo: [f64; 2],
    pub dy: f64,
    pub n: usize,
    /// Row-major in (i, j) ↦ y = y_lo + dy·(i, j); NaN outside the gradient image.
    pub values: Vec<f64>,
    /// Max mismatch between the resampled p and x·∇v − v at the samples.
    pub interpolation_error: f64,
}

struct Sample {
    x: [f64; 2],
    v: f64,
    g: [f64; 2],
    hinv: [f64; 3],
}

/// Nodes at least this many grid steps from ∂Ω contribute samples.
const MARGIN: f64 = 2.0;

fn sample_from(x: [f64; 2], v: f64, g: [f64; 2], hs: [f64; 3]) -> Result<Sample> {
    let [hxx, hxy, hyy] = hs;
    let det = hxx * hyy - hxy * hxy;
    if !(det > 0.0 && hxx > 0.0) {
        return Err(Error::GradientFold(format!("Hessian not positive at {x:?}")));
    }
    Ok(Sample { x, v, g, hinv: [hyy / det, -hxy / det, hxx / det] })
}

/// Centered-difference samples of an arbitrary grid function.
fn fd_samples(grid: &GridDomain, values: &[f64]) -> Result<Vec<Option<Sample>>> {
    let h = grid.h();
    let mut out: Vec<Option<Sample>> = Vec::with_capacity(grid.len());
    for k in 0..grid.len() {
        if !grid.is_full(k) || grid.node_depth(k) < MARGIN * h {
            out.push(None);
            continue;
        }
        let f = |d: usize| values[grid.neighbor(k, d).unwrap()];
        let c = values[k];
        let g = [(f(0) - f(1)) / (2.0 * h), (f(2) - f(3)) / (2.0 * h)];
        let hxx = (f(0) - 2.0 * c + f(1)) / (h * h);
        let hyy = (f(2) - 2.0 * c + f(3)) / (h * h);
        // (1,1) and (1,−1) second differences over step h√2
        let d11 = (f(4) - 2.0 * c + f(5)) / (2.0 * h * h);
        let d1m = (f(6) - 2.0 * c + f(7)) / (2.0 * h * h);
        out.push(Some(sample_from(grid.position(k), c, g, [hxx, 0.5 * (d11 - d1m), hyy])?));
    }
    Ok(out)
}

/// Samples of a solver output, with derivatives from the solver's own stencil.
fn solution_samples(sol: &MASolution) -> Result<Vec<Option<Sample>>> {
    let grid = sol.grid();
    (0..grid.len())
        .map(|k| {
            if grid.node_depth(k) < MARGIN * grid.h() {
                return Ok(None);
            }
            sample_from(grid.position(k), sol.v(k), sol.gradient(k), sol.hessian(k)).map(Some)
        })
        .collect()
}

/// Monotonicity of the gradient map along lattice edges.
fn check_monotone(grid: &GridDomain, samples: &[Option<Sample>]) -> Result<()> {
    for k in 0..grid.len() {
        let Some(a) = &samples[k] else { continue };
        for d in [0, 2, 4, 6] {
            if let Some(m) = grid.neighbor(k, d) {
                if let Some(b) = &samples[m] {
                    let dot = (b.g[0] - a.g[0]) * (b.x[0] - a.x[0]) + (b.g[1] - a.g[1]) * (b.x[1] - a.x[1]);
                    if dot <= 0.0 {
                        return Err(Error::GradientFold(format!("gradient map folds near {:?}", a.x)));
                    }
                }
            }
        }
    }
    Ok(())
}

fn quad_refine(s: &Sample, y: [f64; 2]) -> f64 {
    let d = [y[0] - s.g[0], y[1] - s.g[1]];
    let q = s.hinv[0] * d[0] * d[0] + 2.0 * s.hinv[1] * d[0] * d[1] + s.hinv[2] * d[1] * d[1];
    s.x[0] * y[0] + s.x[1] * y[1] - s.v + 0.5 * q
}

pub fn legendre_transform(sol: &MASolution) -> Result<LegendreTransform> {
    let all = solution_samples(sol)?;
    check_monotone(sol.grid(), &all)?;
    resample(&all, DEFAULT_RESOLUTION)
}

/// Legendre transform of an arbitrary convex grid function, using centered
/// differences.
pub fn legendre_transform_values(grid: &GridDomain, values: &[f64], n: usize) -> Result<LegendreTransform> {
    let all = fd_samples(grid, values)?;
    check_monotone(grid, &all)?;
    resample(&all, n)
}

fn resample(all: &[Option<Sample>], n: usize) -> Result<LegendreTransform> {
    if n < 3 {
        return Err(Error::Invalid("need at least 3 gradient-grid points per axis".into()));
    }
    let pts: Vec<&Sample> = all.iter().flatten().collect();
    if pts.len() < 3 {
        return Err(Error::TooCoarse("not enough interior samples".into()));
    }
    let hull = convex_hull(pts.iter().map(|s| s.g).collect());
    let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
    for p in &hull {
        for k in 0..2 {
            lo[k] = lo[k].min(p[k]);
            hi[k] = hi[k].max(p[k]);
        }
    }
    let dy = (hi[0] - lo[0]).max(hi[1] - lo[1]) / (n - 1) as f64;
    let mut values_out = vec![f64::NAN; n * n];
    for i in 0..n {
        for j in 0..n {
            let y = [lo[0] + dy * i as f64, lo[1] + dy * j as f64];
            if !in_hull(&hull, y) {
                continue;
            }
            let best = pts
                .iter()
                .max_by(|a, b| {
                    let fa = a.x[0] * y[0] + a.x[1] * y[1] - a.v;
                    let fb = b.x[0] * y[0] + b.x[1] * y[1] - b.v;
                    fa.partial_cmp(&fb).unwrap()
                })
                .unwrap();
            values_out[i * n + j] = quad_refine(best, y);
        }
    }
    let mut lt = LegendreTransform { y_lo: lo, dy, n, values: values_out, interpolation_error: 0.0 };
    let mut err: f64 = 0.0;
    for s in &pts {
        if let Some(p) = lt.eval(s.g) {
            err = err.max((p - (s.x[0] * s.g[0] + s.x[1] * s.g[1] - s.v)).abs());
        }
    }
    lt.interpolation_error = err;
    Ok(lt)
}

impl LegendreTransform {
    pub fn y(&self, i: usize, j: usize) -> [f64; 2] {
        [self.y_lo[0] + self.dy * i as f64, self.y_lo[1] + self.dy * j as f64]
    }

    pub fn get(&self, i: usize, j: usize) -> Option<f64> {
        let v = self.values[i * self.n + j];
        (!v.is_nan()).then_some(v)
    }

    /// Bilinear interpolation; None unless all four cell corners are defined.
    pub fn eval(&self, y: [f64; 2]) -> Option<f64> {
        let a = (y[0] - self.y_lo[0]) / self.dy;
        let b = (y[1] - self.y_lo[1]) / self.dy;
        if a < 0.0 || b < 0.0 {
            return None;
        }
        let (i, j) = (a.floor() as usize, b.floor() as usize);
        if i + 1 >= self.n || j + 1 >= self.n {
            return None;
        }
        let (s, t) = (a - i as f64, b - j as f64);
        let f00 = self.get(i, j)?;
        let f10 = self.get(i + 1, j)?;
        let f01 = self.get(i, j + 1)?;
        let f11 = self.get(i + 1, j + 1)?;
        Some((1.0 - s) * (1.0 - t) * f00 + s * (1.0 - t) * f10 + (1.0 - s) * t * f01 + s * t * f11)
    }

    /// The transform of p evaluated at x: sup over grid nodes of x·y − p(y),
    /// refined by a local quadratic model of p. None if the maximizer sits on
    /// the edge of the defined region.
    pub fn conjugate_at(&self, x: [f64; 2]) -> Option<f64> {
        let n = self.n;
        let mut best: Option<(usize, usize, f64)> = None;
        for i in 0..n {
            for j in 0..n {
                if let Some(p) = self.get(i, j) {
                    let y = self.y(i, j);
                    let f = x[0] * y[0] + x[1] * y[1] - p;
                    if best.map_or(true, |(_, _, b)| f > b) {
                        best = Some((i, j, f));
                    }
                }
            }
        }
        let (i, j, _) = best?;
        if i == 0 || j == 0 || i + 1 >= n || j + 1 >= n {
            return None;
        }
        let p = |a: usize, b: usize| self.get(a, b);
        let c = p(i, j)?;
        let (e, w, no, s) = (p(i + 1, j)?, p(i - 1, j)?, p(i, j + 1)?, p(i, j - 1)?);
        let (ne, nw, se, sw) = (p(i + 1, j + 1)?, p(i - 1, j + 1)?, p(i + 1, j - 1)?, p(i - 1, j - 1)?);
        let d = self.dy;
        let g = [(e - w) / (2.0 * d), (no - s) / (2.0 * d)];
        let hxx = (e - 2.0 * c + w) / (d * d);
        let hyy = (no - 2.0 * c + s) / (d * d);
        let hxy = (ne - nw - se + sw) / (4.0 * d * d);
        let det = hxx * hyy - hxy * hxy;
        if !(det > 0.0) {
            return None;
        }
        let y = self.y(i, j);
        let r = [x[0] - g[0], x[1] - g[1]];
        let q = (hyy * r[0] * r[0] - 2.0 * hxy * r[0] * r[1] + hxx * r[1] * r[1]) / det;
        Some(x[0] * y[0] + x[1] * y[1] - c + 0.5 * q)
    }
}

fn in_hull(hull: &[[f64; 2]], q: [f64; 2]) -> bool {
    crate::projective::polygon_contains(hull, q, 0.0)
}
