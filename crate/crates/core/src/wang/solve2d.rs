use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{max_abs, BandedMatrix};

/// Default number of angular samples per ring.
pub const DEFAULT_N_THETA: usize = 128;

/// Horner evaluation of Σ a_k z^k.
pub fn eval_poly(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &a| acc * z + a)
}

/// Solution of Δ₀u + 4|U|²e^{−2u} − 2e^u = 0 on the disk |z| < R_t with
/// u = (1/3)log(2|U|²) on the circle, sampled on a polar grid: node 0 is the
/// center, node 1 + (i−1)·n_theta + j sits at r = i·dr, θ = 2πj/n_theta.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WangSolution2D {
    pub radius: f64,
    pub dr: f64,
    pub n_rings: usize,
    pub n_theta: usize,
    /// Coefficients of U as [re, im] pairs, constant term first.
    pub coeffs: Vec<[f64; 2]>,
    pub u: Vec<f64>,
    pub iterations: usize,
    pub residual: f64,
}

impl WangSolution2D {
    pub fn coefficients(&self) -> Vec<Complex64> {
        self.coeffs.iter().map(|c| Complex64::new(c[0], c[1])).collect()
    }

    pub fn cubic(&self, z: Complex64) -> Complex64 {
        eval_poly(&self.coefficients(), z)
    }

    pub fn dtheta(&self) -> f64 {
        2.0 * PI / self.n_theta as f64
    }

    fn idx(&self, i: usize, j: usize) -> usize {
        if i == 0 {
            0
        } else {
            1 + (i - 1) * self.n_theta + j % self.n_theta
        }
    }

    /// u at ring i (0 = center), angle index j.
    pub fn ring_value(&self, i: usize, j: usize) -> f64 {
        self.u[self.idx(i, j)]
    }

    pub fn center_value(&self) -> f64 {
        self.u[0]
    }

    /// (z, u) for every node.
    pub fn nodes(&self) -> Vec<(Complex64, f64)> {
        let mut out = vec![(Complex64::new(0.0, 0.0), self.u[0])];
        for i in 1..=self.n_rings {
            for j in 0..self.n_theta {
                let z = Complex64::from_polar(i as f64 * self.dr, j as f64 * self.dtheta());
                out.push((z, self.ring_value(i, j)));
            }
        }
        out
    }

    /// Max over rings of the spread of u across the ring.
    pub fn max_angular_variation(&self) -> f64 {
        (1..=self.n_rings)
            .map(|i| {
                let v: Vec<f64> = (0..self.n_theta).map(|j| self.ring_value(i, j)).collect();
                let lo = v.iter().cloned().fold(f64::INFINITY, f64::min);
                let hi = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                hi - lo
            })
            .fold(0.0, f64::max)
    }

    /// Max |F(u)| over the interior nodes.
    pub fn pde_residual(&self) -> f64 {
        let g = PolarGrid { n_rings: self.n_rings, n_theta: self.n_theta, dr: self.dr };
        let q = weights(&g, &self.coefficients());
        max_abs(&assemble(&g, &q, &self.u, false).0)
    }
}

struct PolarGrid {
    n_rings: usize,
    n_theta: usize,
    dr: f64,
}

impl PolarGrid {
    fn len(&self) -> usize {
        1 + self.n_rings * self.n_theta
    }
    fn idx(&self, i: usize, j: usize) -> usize {
        if i == 0 {
            0
        } else {
            1 + (i - 1) * self.n_theta + j % self.n_theta
        }
    }
    fn z(&self, i: usize, j: usize) -> Complex64 {
        Complex64::from_polar(i as f64 * self.dr, 2.0 * PI * j as f64 / self.n_theta as f64)
    }
}

/// 4|U|² at every node.
fn weights(g: &PolarGrid, coeffs: &[Complex64]) -> Vec<f64> {
    let mut q = vec![4.0 * eval_poly(coeffs, Complex64::new(0.0, 0.0)).norm_sqr()];
    for i in 1..=g.n_rings {
        for j in 0..g.n_theta {
            q.push(4.0 * eval_poly(coeffs, g.z(i, j)).norm_sqr());
        }
    }
    q
}

/// Residual (zero on boundary nodes) and, if requested, the Jacobian
/// restricted to the unknowns (center and rings 1..n_rings−1).
fn assemble(g: &PolarGrid, q: &[f64], u: &[f64], jac: bool) -> (Vec<f64>, Option<BandedMatrix>) {
    let nt = g.n_theta;
    let m = 1 + (g.n_rings - 1) * nt;
    let mut f = vec![0.0; g.len()];
    let mut a = if jac { Some(BandedMatrix::zeros(m, nt, nt)) } else { None };
    let dr2 = g.dr * g.dr;
    let dth = 2.0 * PI / nt as f64;
    let react = |k: usize| (q[k] * (-2.0 * u[k]).exp(), 2.0 * u[k].exp());
    // center: Δu ≈ 4(mean of ring 1 − u₀)/dr²
    {
        let mean = (0..nt).map(|j| u[g.idx(1, j)]).sum::<f64>() / nt as f64;
        let (p, e) = react(0);
        f[0] = 4.0 * (mean - u[0]) / dr2 + p - e;
        if let Some(a) = a.as_mut() {
            a.add(0, 0, -4.0 / dr2 - 2.0 * p - e);
            if g.n_rings > 1 {
                for j in 0..nt {
                    a.add(0, g.idx(1, j), 4.0 / (dr2 * nt as f64));
                }
            }
        }
    }
    for i in 1..g.n_rings {
        let r = i as f64 * g.dr;
        let cm = 1.0 / dr2 - 1.0 / (2.0 * g.dr * r);
        let cp = 1.0 / dr2 + 1.0 / (2.0 * g.dr * r);
        let ct = 1.0 / (r * r * dth * dth);
        for j in 0..nt {
            let k = g.idx(i, j);
            let km = g.idx(i - 1, j);
            let kp = g.idx(i + 1, j);
            let kl = g.idx(i, j + nt - 1);
            let kr = g.idx(i, j + 1);
            let (p, e) = react(k);
            f[k] = cm * u[km] + cp * u[kp] + ct * (u[kl] + u[kr]) - (2.0 / dr2 + 2.0 * ct) * u[k] + p - e;
            if let Some(a) = a.as_mut() {
                a.add(k, k, -(2.0 / dr2 + 2.0 * ct) - 2.0 * p - e);
                a.add(k, km, cm);
                if i + 1 < g.n_rings {
                    a.add(k, kp, cp);
                }
                a.add(k, kl, ct);
                a.add(k, kr, ct);
            }
        }
    }
    (f, a)
}

pub fn solve_wang_2d(coeffs: &[Complex64], radius: f64, h: f64, tol: f64) -> Result<WangSolution2D> {
    solve_wang_2d_with(coeffs, radius, h, tol, DEFAULT_N_THETA)
}

pub fn solve_wang_2d_with(
    coeffs: &[Complex64],
    radius: f64,
    h: f64,
    tol: f64,
    n_theta: usize,
) -> Result<WangSolution2D> {
    if !(radius > 0.0 && radius.is_finite() && h > 0.0 && h < radius && tol > 0.0) {
        return Err(Error::Invalid(format!("bad radius/step/tol: {radius}, {h}, {tol}")));
    }
    if n_theta < 8 || n_theta % 2 != 0 {
        return Err(Error::Invalid("n_theta must be even and at least 8".into()));
    }
    if coeffs.is_empty() || coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
        return Err(Error::Invalid("polynomial coefficients must be finite".into()));
    }
    let n_rings = (radius / h).ceil() as usize;
    let g = PolarGrid { n_rings, n_theta, dr: radius / n_rings as f64 };
    let q = weights(&g, coeffs);
    // boundary data, checked on a finer angular sampling as well
    let fine = 8 * n_theta;
    let min_u = (0..fine)
        .map(|j| eval_poly(coeffs, Complex64::from_polar(radius, 2.0 * PI * j as f64 / fine as f64)).norm())
        .fold(f64::INFINITY, f64::min);
    let scale = coeffs.iter().enumerate().map(|(k, c)| c.norm() * radius.powi(k as i32)).fold(0.0, f64::max);
    if !(min_u > 1e-10 * scale.max(1e-300)) {
        return Err(Error::ZeroOnBoundary);
    }
    let flat = |k: usize| (0.5 * q[k]).ln() / 3.0;
    let mut u: Vec<f64> = (0..g.len()).map(|k| flat(k).max(-30.0)).collect();
    // keep the start finite near zeros of U
    let floor = (0.5 * 4.0 * 1e-2 * scale * scale).ln() / 3.0;
    for v in u.iter_mut().take(1 + (n_rings - 1) * n_theta) {
        *v = v.max(floor);
    }
    let m = 1 + (n_rings - 1) * n_theta;
    let (mut f, mut a) = assemble(&g, &q, &u, true);
    let mut res = max_abs(&f);
    let mut iterations = 0;
    let (dr, dth) = (g.dr, 2.0 * PI / n_theta as f64);
    'newton: while res > tol {
        if iterations >= 60 {
            return Err(Error::NewtonDiverged(format!("residual {res:.3e} after {iterations} iterations")));
        }
        iterations += 1;
        let rhs: Vec<f64> = f[..m].iter().map(|v| -v).collect();
        let du = a.take().unwrap().solve(&rhs)?;
        let mut step = 1.0;
        loop {
            let mut trial = u.clone();
            for k in 0..m {
                trial[k] += step * du[k];
            }
            let (tf, ta) = assemble(&g, &q, &trial, true);
            let tr = max_abs(&tf);
            if tr.is_finite() && (tr < res || tr <= tol) {
                u = trial;
                f = tf;
                a = ta;
                res = tr;
                break;
            }
            step *= 0.5;
            if step < 2f64.powi(-20) {
                // rounding floor of the residual: largest stencil weight (ring 1) times |u|
                let w = 4.0 / (dr * dr) + 2.0 / (dr * dr * dth * dth);
                if res <= 64.0 * f64::EPSILON * w * max_abs(&u).max(1.0) {
                    break 'newton;
                }
                return Err(Error::NewtonDiverged(format!("line search failed at residual {res:.3e}")));
            }
        }
    }
    Ok(WangSolution2D {
        radius,
        dr: g.dr,
        n_rings,
        n_theta,
        coeffs: coeffs.iter().map(|c| [c.re, c.im]).collect(),
        u,
        iterations,
        residual: res,
    })
}
