use std::f64::consts::PI;

use nalgebra::Matrix3;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::data::{ConstantData, SphereData};
use super::frame::{initial_frame, integrate_frame, Frame, PathSpec};
use crate::error::{Error, Result};
use crate::projective::{classify_holonomy, HolonomyClass, ProjectiveTransform, DEFAULT_TOL};
use crate::wang::constant_solution;

/// Default integration step for holonomy loops.
pub const DEFAULT_STEP: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HolonomyReport {
    pub matrix: ProjectiveTransform,
    /// max |Im| of the raw holonomy relative to its norm
    pub imaginary_part: f64,
    /// ‖H_ode − H_closed‖/‖H_closed‖ when a closed form is available
    pub closed_form_deviation: Option<f64>,
    pub class: Option<HolonomyClass>,
}

/// Real part of a complex matrix, after checking the imaginary part is
/// negligible relative to the norm.
fn real_part(g: &Matrix3<Complex64>, tol: f64) -> Result<(Matrix3<f64>, f64)> {
    let norm = g.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    let im = g.iter().map(|c| c.im.abs()).fold(0.0, f64::max) / norm;
    if !(im <= tol) {
        return Err(Error::InvariantDrift(format!("holonomy has imaginary part {im:.3e}")));
    }
    Ok((g.map(|c| c.re), im))
}

/// Coefficient matrices A, B of F_z = F·A, F_z̄ = F·B for constant ψ and U.
pub fn constant_coefficients(psi: f64, u: Complex64) -> (Matrix3<Complex64>, Matrix3<Complex64>) {
    let z = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let e = Complex64::new(0.5 * psi.exp(), 0.0);
    let ue = u * (-psi).exp();
    let a = Matrix3::new(z, z, e, one, z, z, z, ue, z);
    let b = Matrix3::new(z, e, z, z, z, ue.conj(), one, z, z);
    (a, b)
}

/// Holonomy of the flat cylinder ℓ ↦ ℓ + 2πi with U = R dℓ³.
pub fn holonomy_cylinder(r: Complex64) -> Result<ProjectiveTransform> {
    holonomy_cylinder_report(r, DEFAULT_STEP).map(|h| h.matrix)
}

pub fn holonomy_cylinder_report(r: Complex64, step: f64) -> Result<HolonomyReport> {
    let data = ConstantData::flat_cylinder(r)?;
    let f0 = initial_frame(data.psi)?;
    let path = PathSpec::straight(Complex64::new(0.0, 0.0), Complex64::new(0.0, 2.0 * PI));
    let f1 = integrate_frame(&f0, &data, &path, step)?;
    let m0 = f0.matrix();
    let inv = m0.try_inverse().ok_or(Error::Singular)?;
    let g = f1.matrix() * inv;
    let (a, b) = constant_coefficients(data.psi, r);
    let i2pi = Complex64::new(0.0, 2.0 * PI);
    let closed = m0 * ((a - b) * i2pi).exp() * inv;
    let cn = closed.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    let dev = (g - closed).iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt() / cn;
    let (re, im) = real_part(&g, 1e-9)?;
    let matrix = ProjectiveTransform::from_unimodular(re)?;
    let class = classify_holonomy(&matrix, DEFAULT_TOL).ok();
    Ok(HolonomyReport { matrix, imaginary_part: im, closed_form_deviation: Some(dev), class })
}

/// Holonomy of the deck map ι(z) = a·z + b: integrates from z0 to ι(z0) and
/// returns G = F(ι z0)·D(1, a, ā)·F(z0)⁻¹, so that f∘ι = G·f.
///
/// The data must satisfy ψ(ιz) + 2 log|a| = ψ(z) and U(ιz)·a³ = U(z) to
/// within `equiv_tol` along the path, else NotEquivariant.
pub fn holonomy_affine_deck(
    data: &dyn SphereData,
    frame0: &Frame,
    a: Complex64,
    b: Complex64,
    z0: Complex64,
    step: f64,
    equiv_tol: f64,
) -> Result<ProjectiveTransform> {
    if a.norm() == 0.0 || !a.re.is_finite() || !a.im.is_finite() {
        return Err(Error::Invalid("deck map must be invertible".into()));
    }
    let iota = |z: Complex64| a * z + b;
    let z1 = iota(z0);
    for k in 0..=16 {
        let z = z0 + (z1 - z0) * (k as f64 / 16.0);
        let d = data.sample(z)?;
        let di = data.sample(iota(z))?;
        let dpsi = (di.psi + 2.0 * a.norm().ln() - d.psi).abs();
        let du = (di.cubic * a * a * a - d.cubic).norm();
        if dpsi > equiv_tol || du > equiv_tol * d.cubic.norm().max(1.0) {
            return Err(Error::NotEquivariant(format!("at z = {z}: Δψ = {dpsi:.3e}, ΔU = {du:.3e}")));
        }
    }
    let path = PathSpec::straight(z0, z1);
    let len = path.length();
    let f1 = if len == 0.0 { *frame0 } else { integrate_frame(frame0, data, &path, step.min(len / 100.0))? };
    let one = Complex64::new(1.0, 0.0);
    let d = Matrix3::from_diagonal(&nalgebra::Vector3::new(one, a, a.conj()));
    let inv = frame0.matrix().try_inverse().ok_or(Error::Singular)?;
    let g = f1.matrix() * d * inv;
    let (re, _) = real_part(&g, 1e-8)?;
    ProjectiveTransform::from_unimodular(re)
}

/// Frame at 0 for the flat cylinder with residue R.
pub fn cylinder_frame(r: Complex64) -> Result<Frame> {
    initial_frame(constant_solution(r)?)
}
