use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::wang::{constant_solution, WangSolution2D};

/// ψ, ψ_z and U at a point of the coordinate chart.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DataSample {
    pub psi: f64,
    pub psi_z: Complex64,
    pub cubic: Complex64,
}

/// Blaschke metric e^ψ|dz|² and cubic differential U dz³ on a chart.
pub trait SphereData {
    fn sample(&self, z: Complex64) -> Result<DataSample>;
}

/// Constant ψ and U: the Ţiţeica sphere (ψ = log 2, U = 2) and, on the
/// cylinder coordinate ℓ = log z, the flat end with residue R.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstantData {
    pub psi: f64,
    pub cubic: Complex64,
}

impl ConstantData {
    pub fn titeica() -> Self {
        ConstantData { psi: 2f64.ln(), cubic: Complex64::new(2.0, 0.0) }
    }

    /// Flat cylinder with U = R dℓ³ and e^ψ = (2|R|²)^{1/3}.
    pub fn flat_cylinder(r: Complex64) -> Result<Self> {
        Ok(ConstantData { psi: constant_solution(r)?, cubic: r })
    }
}

impl SphereData for ConstantData {
    fn sample(&self, _z: Complex64) -> Result<DataSample> {
        Ok(DataSample { psi: self.psi, psi_z: Complex64::new(0.0, 0.0), cubic: self.cubic })
    }
}

/// Poincaré disk 4|dz|²/(1−|z|²)² with U = 0; develops onto a conic.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct HyperbolicDisk;

impl SphereData for HyperbolicDisk {
    fn sample(&self, z: Complex64) -> Result<DataSample> {
        let s = 1.0 - z.norm_sqr();
        if !(s > 0.0) {
            return Err(Error::DataOffGrid(format!("{z}")));
        }
        Ok(DataSample {
            psi: 4f64.ln() - 2.0 * s.ln(),
            psi_z: 2.0 * z.conj() / s,
            cubic: Complex64::new(0.0, 0.0),
        })
    }
}

/// Piecewise-cubic interpolation of a polar-grid Wang solution, with the
/// Cartesian gradient precomputed at the nodes.
#[derive(Debug, Clone)]
pub struct InterpolatedWang {
    coeffs: Vec<Complex64>,
    dr: f64,
    n_rings: usize,
    n_theta: usize,
    psi: Vec<f64>,
    px: Vec<f64>,
    py: Vec<f64>,
}

impl InterpolatedWang {
    pub fn new(sol: &WangSolution2D) -> Self {
        let nt = sol.n_theta;
        let nr = sol.n_rings;
        let dr = sol.dr;
        let dth = sol.dtheta();
        let v = |i: usize, j: usize| sol.ring_value(i, j);
        let mut px = vec![0.0; sol.u.len()];
        let mut py = vec![0.0; sol.u.len()];
        // center gradient from the first Fourier mode of rings 1 and 2
        let mode = |i: usize| {
            let (mut a, mut b) = (0.0, 0.0);
            for j in 0..nt {
                let t = j as f64 * dth;
                a += v(i, j) * t.cos();
                b += v(i, j) * t.sin();
            }
            let r = i as f64 * dr;
            (2.0 * a / (nt as f64 * r), 2.0 * b / (nt as f64 * r))
        };
        let (a1, b1) = mode(1);
        if nr >= 2 {
            let (a2, b2) = mode(2);
            px[0] = (4.0 * a1 - a2) / 3.0;
            py[0] = (4.0 * b1 - b2) / 3.0;
        } else {
            px[0] = a1;
            py[0] = b1;
        }
        for i in 1..=nr {
            let r = i as f64 * dr;
            for j in 0..nt {
                let pr = if i < nr {
                    (v(i + 1, j) - v(i - 1, j)) / (2.0 * dr)
                } else {
                    (3.0 * v(i, j) - 4.0 * v(i - 1, j) + v(i - 2, j)) / (2.0 * dr)
                };
                let pt = (v(i, j + 1) - v(i, j + nt - 1)) / (2.0 * dth);
                let t = j as f64 * dth;
                let k = 1 + (i - 1) * nt + j;
                px[k] = t.cos() * pr - t.sin() * pt / r;
                py[k] = t.sin() * pr + t.cos() * pt / r;
            }
        }
        InterpolatedWang {
            coeffs: sol.coefficients(),
            dr,
            n_rings: nr,
            n_theta: nt,
            psi: sol.u.clone(),
            px,
            py,
        }
    }

    pub fn radius(&self) -> f64 {
        self.dr * self.n_rings as f64
    }

    /// Field value on ring `i` (negative = opposite side through the center)
    /// at angle θ, cubic in θ.
    fn ring(&self, field: &[f64], i: isize, theta: f64) -> f64 {
        if i == 0 {
            return field[0];
        }
        let (i, theta) = if i < 0 { ((-i) as usize, theta + PI) } else { (i as usize, theta) };
        let nt = self.n_theta as isize;
        let s = theta.rem_euclid(2.0 * PI) / (2.0 * PI / self.n_theta as f64);
        let j0 = s.floor() as isize;
        let w = lagrange4(s - j0 as f64);
        let base = 1 + (i - 1) * self.n_theta;
        (0..4).map(|k| w[k] * field[base + (j0 - 1 + k as isize).rem_euclid(nt) as usize]).sum()
    }

    fn eval(&self, field: &[f64], r: f64, theta: f64) -> f64 {
        let s = r / self.dr;
        let mut i0 = s.floor() as isize;
        // keep the 4-point stencil inside the grid
        i0 = i0.min(self.n_rings as isize - 2);
        let w = lagrange4(s - i0 as f64);
        (0..4).map(|k| w[k] * self.ring(field, i0 - 1 + k as isize, theta)).sum()
    }
}

/// Cubic Lagrange weights for nodes −1, 0, 1, 2 at offset t.
fn lagrange4(t: f64) -> [f64; 4] {
    [
        -t * (t - 1.0) * (t - 2.0) / 6.0,
        (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0,
        -(t + 1.0) * t * (t - 2.0) / 2.0,
        (t + 1.0) * t * (t - 1.0) / 6.0,
    ]
}

impl SphereData for InterpolatedWang {
    fn sample(&self, z: Complex64) -> Result<DataSample> {
        let r = z.norm();
        if !(r <= self.radius() * (1.0 + 1e-12)) {
            return Err(Error::DataOffGrid(format!("{z}")));
        }
        let theta = z.arg();
        let psi = self.eval(&self.psi, r, theta);
        let gx = self.eval(&self.px, r, theta);
        let gy = self.eval(&self.py, r, theta);
        let cubic = crate::wang::eval_poly(&self.coeffs, z);
        Ok(DataSample { psi, psi_z: 0.5 * Complex64::new(gx, -gy), cubic })
    }
}
