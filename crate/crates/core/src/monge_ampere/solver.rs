use serde::{Deserialize, Serialize};

use super::grid::{GridDomain, DIRS};
use crate::error::{Error, Result};
use crate::linalg::{max_abs, BandedMatrix};
use crate::projective::ConvexDomainApprox;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MaOptions {
    pub h: f64,
    pub tol: f64,
    pub max_iter: usize,
    /// The unknown is w = (−v)^p. With p = 2 the disk solution is a quadratic
    /// polynomial and w vanishes linearly on smooth boundary arcs.
    pub exponent: f64,
}

impl Default for MaOptions {
    fn default() -> Self {
        MaOptions { h: 1.0 / 64.0, tol: 1e-9, max_iter: 50, exponent: 2.0 }
    }
}

/// Solution of det D²v = (−1/v)⁴, v = 0 on ∂Ω, on a grid.
#[derive(Debug, Clone)]
pub struct MASolution {
    grid: GridDomain,
    w: Vec<f64>,
    exponent: f64,
    iterations: usize,
    residual: f64,
}

/// Finite-difference data of a grid function at one node.
#[derive(Debug, Clone, Copy, Default)]
pub struct Derivs {
    pub u: f64,
    pub ux: f64,
    pub uy: f64,
    pub uxx: f64,
    pub uyy: f64,
    pub uxy: f64,
}

/// Shortley-Weller weights at a node: second differences along the four
/// lattice directions and first differences along the axes, as
/// (minus, center, plus) triples.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Stencil {
    pub second: [[f64; 3]; 4],
    pub first: [[f64; 3]; 2],
}

impl Stencil {
    pub fn at(grid: &GridDomain, k: usize) -> Self {
        let h = grid.h();
        let mut second = [[0.0; 3]; 4];
        let mut first = [[0.0; 3]; 2];
        for pair in 0..4 {
            let (dp, dm) = (2 * pair, 2 * pair + 1);
            let len = h * ((DIRS[dp][0] * DIRS[dp][0] + DIRS[dp][1] * DIRS[dp][1]) as f64).sqrt();
            let bp = grid.cut(k, dp) * len;
            let bm = grid.cut(k, dm) * len;
            second[pair] = [2.0 / (bm * (bp + bm)), -2.0 / (bp * bm), 2.0 / (bp * (bp + bm))];
            if pair < 2 {
                let den = bp * bm * (bp + bm);
                first[pair] = [-bp * bp / den, (bp * bp - bm * bm) / den, bm * bm / den];
            }
        }
        Stencil { second, first }
    }
}

/// Derivatives of a field vanishing on the boundary.
pub(crate) fn derivs(grid: &GridDomain, u: &[f64], k: usize) -> Derivs {
    let s = Stencil::at(grid, k);
    let val = |d: usize| grid.neighbor(k, d).map_or(0.0, |m| u[m]);
    let u0 = u[k];
    let mut sec = [0.0; 4];
    for (pair, sp) in sec.iter_mut().enumerate() {
        let w = s.second[pair];
        *sp = w[0] * val(2 * pair + 1) + w[1] * u0 + w[2] * val(2 * pair);
    }
    let mut fst = [0.0; 2];
    for (axis, f) in fst.iter_mut().enumerate() {
        let w = s.first[axis];
        *f = w[0] * val(2 * axis + 1) + w[1] * u0 + w[2] * val(2 * axis);
    }
    Derivs { u: u0, ux: fst[0], uy: fst[1], uxx: sec[0], uyy: sec[1], uxy: 0.5 * (sec[2] - sec[3]) }
}

struct Local {
    g: f64,
    // ∂G/∂(w, wx, wy, wxx, wyy, wxy)
    dg: [f64; 6],
}

/// Convex-branch form of the transformed equation at one node.
///
/// With M = (1 − 1/p)∇w∇wᵀ − w D²w the equation reads det M = p² w^{4−6/p},
/// and the convex solution is the root of tr M − √((M11−M22)² + 4M12² + 4 rhs).
fn local(d: &Derivs, p: f64) -> Local {
    let q = 1.0 - 1.0 / p;
    let w = d.u;
    let m11 = q * d.ux * d.ux - w * d.uxx;
    let m22 = q * d.uy * d.uy - w * d.uyy;
    let m12 = q * d.ux * d.uy - w * d.uxy;
    let e = 4.0 - 6.0 / p;
    let wa = w.abs();
    let rhs = p * p * wa.powf(e);
    let drhs = if e == 0.0 { 0.0 } else { p * p * e * wa.powf(e - 1.0) };
    let a = m11 - m22;
    let s = (a * a + 4.0 * m12 * m12 + 4.0 * rhs).sqrt();
    let g = m11 + m22 - s;
    let (ca, cb, cc) = (1.0 - a / s, 1.0 + a / s, -4.0 * m12 / s);
    let dw = -d.uxx * ca - d.uyy * cb - d.uxy * cc - 2.0 * drhs / s;
    let dwx = 2.0 * q * d.ux * ca + q * d.uy * cc;
    let dwy = 2.0 * q * d.uy * cb + q * d.ux * cc;
    Local { g, dg: [dw, dwx, dwy, -w * ca, -w * cb, -w * cc] }
}

fn residual(grid: &GridDomain, w: &[f64], p: f64) -> Vec<f64> {
    (0..grid.len()).map(|k| local(&derivs(grid, w, k), p).g).collect()
}

fn jacobian(grid: &GridDomain, w: &[f64], p: f64) -> BandedMatrix {
    let bw = grid.bandwidth();
    let mut jac = BandedMatrix::zeros(grid.len(), bw, bw);
    for k in 0..grid.len() {
        let l = local(&derivs(grid, w, k), p);
        let s = Stencil::at(grid, k);
        let mut add = |d: Option<usize>, v: f64| match d {
            Some(m) => jac.add(k, m, v),
            None => {}
        };
        add(Some(k), l.dg[0]);
        // first derivatives
        for axis in 0..2 {
            let c = l.dg[1 + axis];
            let f = s.first[axis];
            add(grid.neighbor(k, 2 * axis + 1), c * f[0]);
            add(Some(k), c * f[1]);
            add(grid.neighbor(k, 2 * axis), c * f[2]);
        }
        // second derivatives: uxx, uyy, and uxy = (D_(1,1) − D_(1,−1))/2
        let coef = [l.dg[3], l.dg[4], 0.5 * l.dg[5], -0.5 * l.dg[5]];
        for pair in 0..4 {
            let f = s.second[pair];
            add(grid.neighbor(k, 2 * pair + 1), coef[pair] * f[0]);
            add(Some(k), coef[pair] * f[1]);
            add(grid.neighbor(k, 2 * pair), coef[pair] * f[2]);
        }
    }
    jac
}

/// Initial guess −r^{2/3}·√(1 − γ²), γ the gauge of the chart polygon about
/// the center of its largest inscribed disk (radius r). Exact for disks.
fn initial_guess(grid: &GridDomain, p: f64) -> Vec<f64> {
    let (c, r) = grid.domain().inscribed_disk();
    let poly = grid.polygon();
    let n = poly.len();
    let mut planes = Vec::with_capacity(n);
    for i in 0..n {
        let (a, b) = (poly[i], poly[(i + 1) % n]);
        let e = [b[0] - a[0], b[1] - a[1]];
        let len = e[0].hypot(e[1]);
        if len < 1e-14 {
            continue;
        }
        let nrm = [e[1] / len, -e[0] / len];
        let off = nrm[0] * (a[0] - c[0]) + nrm[1] * (a[1] - c[1]);
        planes.push((nrm, off));
    }
    (0..grid.len())
        .map(|k| {
            let x = grid.position(k);
            let gauge = planes
                .iter()
                .map(|(nrm, off)| (nrm[0] * (x[0] - c[0]) + nrm[1] * (x[1] - c[1])) / off)
                .fold(0.0f64, f64::max)
                .min(1.0 - 1e-12);
            let v = r.powf(2.0 / 3.0) * (1.0 - gauge * gauge).sqrt();
            v.powf(p)
        })
        .collect()
}

pub fn solve_dirichlet(omega: &ConvexDomainApprox, h: f64, tol: f64, max_iter: usize) -> Result<MASolution> {
    solve_dirichlet_with(omega, &MaOptions { h, tol, max_iter, ..MaOptions::default() })
}

/// Damped Newton for the Dirichlet problem in the domain's chart.
pub fn solve_dirichlet_with(omega: &ConvexDomainApprox, opts: &MaOptions) -> Result<MASolution> {
    if !(opts.tol >= 1e-12) {
        return Err(Error::Invalid(format!("tol must be ≥ 1e-12, got {}", opts.tol)));
    }
    if !(opts.exponent >= 1.0) {
        return Err(Error::Invalid("exponent must be ≥ 1".into()));
    }
    let grid = GridDomain::new(omega, opts.h)?;
    if grid.len() < 100 {
        return Err(Error::TooCoarse(format!("only {} interior nodes (need ≥ 100)", grid.len())));
    }
    let p = opts.exponent;
    let mut w = initial_guess(&grid, p);
    let mut g = residual(&grid, &w, p);
    let mut r = max_abs(&g);
    let mut it = 0;
    while r > opts.tol {
        if it == opts.max_iter {
            return Err(Error::NewtonDiverged(format!("residual {r:.3e} after {it} iterations")));
        }
        it += 1;
        let rhs: Vec<f64> = g.iter().map(|x| -x).collect();
        let dw = jacobian(&grid, &w, p).solve(&rhs).map_err(|_| Error::NewtonDiverged("singular Jacobian".into()))?;
        let mut step = 1.0;
        loop {
            let trial: Vec<f64> = w.iter().zip(&dw).map(|(a, b)| a + step * b).collect();
            if trial.iter().all(|x| *x > 0.0) {
                let gt = residual(&grid, &trial, p);
                let rt = max_abs(&gt);
                if rt < r {
                    w = trial;
                    g = gt;
                    r = rt;
                    break;
                }
            }
            step *= 0.5;
            if step < 2f64.powi(-20) {
                return Err(Error::NewtonDiverged(format!("no decrease from residual {r:.3e} at minimum damping")));
            }
        }
    }
    let sol = MASolution { grid, w, exponent: p, iterations: it, residual: r };
    sol.check_convexity()?;
    Ok(sol)
}

impl MASolution {
    pub fn grid(&self) -> &GridDomain {
        &self.grid
    }

    pub fn iterations(&self) -> usize {
        self.iterations
    }

    /// Max-norm residual of the transformed equation at the last iterate.
    pub fn residual(&self) -> f64 {
        self.residual
    }

    pub fn exponent(&self) -> f64 {
        self.exponent
    }

    pub fn v(&self, k: usize) -> f64 {
        -self.w[k].powf(1.0 / self.exponent)
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.grid.len()).map(|k| self.v(k)).collect()
    }

    /// Value at the node nearest to a chart point, if it is a node.
    pub fn value_at(&self, p: [f64; 2]) -> Option<f64> {
        self.grid.nearest(p).map(|k| self.v(k))
    }

    /// Hessian of v at node k, [v_xx, v_xy, v_yy], from the transformed
    /// unknown: D²v = (1/p) w^{1/p−2} M.
    pub fn hessian(&self, k: usize) -> [f64; 3] {
        let d = derivs(&self.grid, &self.w, k);
        let p = self.exponent;
        let q = 1.0 - 1.0 / p;
        let f = d.u.powf(1.0 / p - 2.0) / p;
        [
            f * (q * d.ux * d.ux - d.u * d.uxx),
            f * (q * d.ux * d.uy - d.u * d.uxy),
            f * (q * d.uy * d.uy - d.u * d.uyy),
        ]
    }

    /// Gradient of v at node k.
    pub fn gradient(&self, k: usize) -> [f64; 2] {
        let d = derivs(&self.grid, &self.w, k);
        let p = self.exponent;
        let f = -d.u.powf(1.0 / p - 1.0) / p;
        [f * d.ux, f * d.uy]
    }

    /// max over nodes of |v⁴ det D²v − 1|, the relative residual of the
    /// original equation, over nodes at least `margin` from the boundary.
    pub fn relative_pde_residual(&self, margin: f64) -> f64 {
        let mut r: f64 = 0.0;
        for k in 0..self.grid.len() {
            if self.grid.node_depth(k) < margin {
                continue;
            }
            let [a, b, c] = self.hessian(k);
            let v = self.v(k);
            r = r.max((v.powi(4) * (a * c - b * b) - 1.0).abs());
        }
        r
    }

    fn check_convexity(&self) -> Result<()> {
        for k in 0..self.grid.len() {
            let [a, b, c] = self.hessian(k);
            let lmin = 0.5 * (a + c) - (0.25 * (a - c) * (a - c) + b * b).sqrt();
            let scale = a.abs().max(c.abs()).max(1.0);
            if lmin < -1e-8 * scale {
                let x = self.grid.position(k);
                return Err(Error::LostConvexity(format!("Hessian eigenvalue {lmin:.3e} at {x:?}")));
            }
        }
        Ok(())
    }

    /// Node of smallest v.
    pub fn argmin(&self) -> usize {
        (0..self.grid.len()).max_by(|a, b| self.w[*a].partial_cmp(&self.w[*b]).unwrap()).unwrap()
    }

    /// Minimum point and value, refined by one Newton step on the gradient.
    pub fn minimum(&self) -> ([f64; 2], f64) {
        let k = self.argmin();
        let x = self.grid.position(k);
        let g = self.gradient(k);
        let [a, b, c] = self.hessian(k);
        let det = a * c - b * b;
        let dx = [-(c * g[0] - b * g[1]) / det, -(-b * g[0] + a * g[1]) / det];
        let v = self.v(k) + 0.5 * (g[0] * dx[0] + g[1] * dx[1]);
        ([x[0] + dx[0], x[1] + dx[1]], v)
    }
}
