use std::ops::Mul;

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use super::point::ProjectivePoint;
use crate::error::{Error, Result};

/// Element of SL(3,ℝ) acting on RP².
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 9]", into = "[f64; 9]")]
pub struct ProjectiveTransform {
    m: Matrix3<f64>,
}

impl ProjectiveTransform {
    /// Normalizes to unit determinant. Rejects det ≤ 0.
    pub fn new(m: Matrix3<f64>) -> Result<Self> {
        if m.iter().any(|x| !x.is_finite()) {
            return Err(Error::Invalid("non-finite matrix entry".into()));
        }
        let det = m.determinant();
        // Hadamard's bound: |det| ≤ Π‖row‖
        let scale: f64 = m.row_iter().map(|r| r.norm()).product();
        if !(det > 1e-14 * scale) || scale == 0.0 {
            return Err(Error::NonPositiveDeterminant(det));
        }
        Ok(ProjectiveTransform { m: m / det.cbrt() })
    }

    /// Wraps a matrix whose determinant is 1 analytically (such as an ODE
    /// holonomy) without rescaling: for badly conditioned matrices the
    /// computed determinant is less accurate than the entries.
    pub(crate) fn from_unimodular(m: Matrix3<f64>) -> Result<Self> {
        let det = m.determinant();
        if m.iter().any(|x| !x.is_finite()) || !(det > 0.0) {
            return Err(Error::NonPositiveDeterminant(det));
        }
        Ok(ProjectiveTransform { m })
    }

    /// Like [`new`](Self::new) but accepts det < 0, replacing the matrix by
    /// its negative (the same map of RP²).
    pub fn from_projective(m: Matrix3<f64>) -> Result<Self> {
        if m.determinant() < 0.0 {
            Self::new(-m)
        } else {
            Self::new(m)
        }
    }

    pub fn from_rows(rows: [[f64; 3]; 3]) -> Result<Self> {
        Self::new(Matrix3::from_fn(|i, j| rows[i][j]))
    }

    pub fn identity() -> Self {
        ProjectiveTransform { m: Matrix3::identity() }
    }

    pub fn diag(a: f64, b: f64, c: f64) -> Result<Self> {
        Self::new(Matrix3::from_diagonal(&Vector3::new(a, b, c)))
    }

    pub fn matrix(&self) -> &Matrix3<f64> {
        &self.m
    }

    pub fn inverse(&self) -> Self {
        // det = 1, so the inverse exists
        ProjectiveTransform { m: self.m.try_inverse().expect("unimodular matrix is invertible") }
    }

    pub fn apply(&self, p: &ProjectivePoint) -> ProjectivePoint {
        ProjectivePoint::from_vector(self.m * p.rep()).expect("invertible map keeps points nonzero")
    }

    pub fn conjugate_by(&self, a: &ProjectiveTransform) -> ProjectiveTransform {
        *a * *self * a.inverse()
    }

    pub fn to_row_major(&self) -> [f64; 9] {
        let mut out = [0.0; 9];
        for i in 0..3 {
            for j in 0..3 {
                out[3 * i + j] = self.m[(i, j)];
            }
        }
        out
    }
}

impl Mul for ProjectiveTransform {
    type Output = ProjectiveTransform;
    fn mul(self, rhs: Self) -> Self {
        let m = self.m * rhs.m;
        // renormalize against rounding drift
        let det = m.determinant();
        ProjectiveTransform { m: m / det.cbrt() }
    }
}

impl TryFrom<[f64; 9]> for ProjectiveTransform {
    type Error = Error;
    fn try_from(a: [f64; 9]) -> Result<Self> {
        Self::new(Matrix3::from_row_slice(&a))
    }
}

impl From<ProjectiveTransform> for [f64; 9] {
    fn from(t: ProjectiveTransform) -> Self {
        t.to_row_major()
    }
}

fn check_exponent(e: f64, what: &str) -> Result<()> {
    if !e.is_finite() || e.abs() > 300.0 {
        return Err(Error::Overflow(format!("{what}: exponent {e} out of range")));
    }
    Ok(())
}

/// Goldman's gluing matrix M_{σ,τ} = D(e^{−σ−τ}, e^{2τ}, e^{σ−τ}); σ is the
/// twist parameter and τ the bulge parameter.
pub fn twist_bulge_matrix(sigma: f64, tau: f64) -> Result<ProjectiveTransform> {
    let e = [-sigma - tau, 2.0 * tau, sigma - tau];
    for x in e {
        check_exponent(x, "twist_bulge_matrix")?;
    }
    Ok(ProjectiveTransform { m: Matrix3::from_diagonal(&Vector3::new(e[0].exp(), e[1].exp(), e[2].exp())) })
}

/// M_s = D(s^{1/3}, s^{−2/3}, s^{1/3}).
pub fn bulge_flow(s: f64) -> Result<ProjectiveTransform> {
    if !(s > 0.0) || !s.is_finite() {
        return Err(Error::Invalid(format!("bulge_flow needs s > 0, got {s}")));
    }
    if !(1e-200..=1e200).contains(&s) {
        return Err(Error::Overflow(format!("bulge_flow: s = {s} outside [1e-200, 1e200]")));
    }
    let a = s.cbrt();
    Ok(ProjectiveTransform { m: Matrix3::from_diagonal(&Vector3::new(a, 1.0 / (a * a), a)) })
}

/// The reflection J = D(1, −1, 1) across the principal geodesic.
pub fn principal_reflection() -> ProjectiveTransform {
    ProjectiveTransform::from_projective(Matrix3::from_diagonal(&Vector3::new(1.0, -1.0, 1.0)))
        .expect("J is invertible")
}
