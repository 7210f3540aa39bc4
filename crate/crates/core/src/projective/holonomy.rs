use nalgebra::Matrix3;
use serde::{Deserialize, Serialize};

use super::transform::ProjectiveTransform;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HolonomyKind {
    Hyperbolic,
    QuasiHyperbolic,
    Parabolic,
}

impl std::fmt::Display for HolonomyKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            HolonomyKind::Hyperbolic => "hyperbolic",
            HolonomyKind::QuasiHyperbolic => "quasi_hyperbolic",
            HolonomyKind::Parabolic => "parabolic",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HolonomyClass {
    pub kind: HolonomyKind,
    /// Ascending; coincident eigenvalues are reported by their cluster mean.
    pub eigenvalues: [f64; 3],
    /// Geometric multiplicity of the repeated eigenvalue (1 for hyperbolic).
    pub geometric_multiplicity: usize,
    /// The repeated eigenvalue sits in a single Jordan block.
    pub jordan_maximal: bool,
}

pub const DEFAULT_TOL: f64 = 1e-6;

/// Classify an SL(3,ℝ) element by its spectrum.
///
/// Two eigenvalues coincide when their relative gap is ≤ `tol`, or when the
/// matrix is within `tol` (backward error on the characteristic polynomial)
/// of one with a repeated root; the second test catches defective clusters,
/// whose computed eigenvalues split like ε^{1/k}. The Jordan structure is the
/// number of singular values of M − λI below tol·‖M‖.
pub fn classify_holonomy(m: &ProjectiveTransform, tol: f64) -> Result<HolonomyClass> {
    if !(tol > 0.0 && tol <= 1e-2) {
        return Err(Error::Invalid(format!("tol must lie in (0, 1e-2], got {tol}")));
    }
    let a = *m.matrix();
    let norm = a.norm();
    let ev = a.complex_eigenvalues();
    let mut lam = [0.0; 3];
    for (k, z) in ev.iter().enumerate() {
        if z.im.abs() > tol * norm || z.re <= 0.0 {
            return Err(Error::NotPositiveSpectrum(format!("eigenvalue {z}")));
        }
        lam[k] = z.re;
    }
    lam.sort_by(|x, y| x.partial_cmp(y).unwrap());

    // characteristic polynomial p(λ) = λ³ − c1 λ² + c2 λ − c3
    let c1 = a.trace();
    let c2 = (a[(0, 0)] * a[(1, 1)] - a[(0, 1)] * a[(1, 0)])
        + (a[(0, 0)] * a[(2, 2)] - a[(0, 2)] * a[(2, 0)])
        + (a[(1, 1)] * a[(2, 2)] - a[(1, 2)] * a[(2, 1)]);
    let c3 = a.determinant();
    let coincide = |x: f64, y: f64| -> bool {
        let scale = x.abs().max(y.abs());
        if (x - y).abs() <= tol * scale {
            return true;
        }
        // backward test: p'(μ) ≈ 0 at the midpoint, relative to the size of p'
        let mu = 0.5 * (x + y);
        let dp = 3.0 * mu * mu - 2.0 * c1 * mu + c2;
        let size = 3.0 * mu * mu + 2.0 * c1.abs() * mu.abs() + c2.abs() + c3.abs() / mu.abs().max(1e-300);
        dp.abs() <= tol * tol * size && (x - y).abs() <= tol.cbrt() * scale
    };
    let e01 = coincide(lam[0], lam[1]);
    let e12 = coincide(lam[1], lam[2]);
    let (kind, cluster): (HolonomyKind, Option<(usize, usize)>) = match (e01, e12) {
        (true, true) => (HolonomyKind::Parabolic, Some((0, 3))),
        (true, false) => (HolonomyKind::QuasiHyperbolic, Some((0, 2))),
        (false, true) => (HolonomyKind::QuasiHyperbolic, Some((1, 3))),
        (false, false) => (HolonomyKind::Hyperbolic, None),
    };
    let mut geometric_multiplicity = 1;
    let mut jordan_maximal = true;
    if let Some((lo, hi)) = cluster {
        let mean = lam[lo..hi].iter().sum::<f64>() / (hi - lo) as f64;
        for x in lam[lo..hi].iter_mut() {
            *x = mean;
        }
        let shifted = a - Matrix3::identity() * mean;
        let sv = shifted.singular_values();
        geometric_multiplicity = sv.iter().filter(|s| **s <= tol * norm).count().max(1);
        jordan_maximal = geometric_multiplicity == 1;
    }
    Ok(HolonomyClass { kind, eigenvalues: lam, geometric_multiplicity, jordan_maximal })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(rows: [[f64; 3]; 3]) -> ProjectiveTransform {
        ProjectiveTransform::from_rows(rows).unwrap()
    }

    #[test]
    fn diagonal_is_hyperbolic() {
        let c = classify_holonomy(&ProjectiveTransform::diag(2.0, 1.0, 0.5).unwrap(), 1e-6).unwrap();
        assert_eq!(c.kind, HolonomyKind::Hyperbolic);
        let want = [0.5, 1.0, 2.0];
        for k in 0..3 {
            assert!((c.eigenvalues[k] - want[k]).abs() < 1e-12);
        }
    }

    #[test]
    fn unipotent_is_parabolic() {
        let c = classify_holonomy(&t([[1., 1., 0.], [0., 1., 1.], [0., 0., 1.]]), 1e-6).unwrap();
        assert_eq!(c.kind, HolonomyKind::Parabolic);
        assert!(c.jordan_maximal);
        assert!(c.eigenvalues.iter().all(|x| (x - 1.0).abs() < 1e-10));
    }

    #[test]
    fn jordan_pair_is_quasi_hyperbolic() {
        let c = classify_holonomy(&t([[2., 1., 0.], [0., 2., 0.], [0., 0., 0.25]]), 1e-6).unwrap();
        assert_eq!(c.kind, HolonomyKind::QuasiHyperbolic);
        assert!(c.jordan_maximal);
        assert!((c.eigenvalues[0] - 0.25).abs() < 1e-12 && (c.eigenvalues[2] - 2.0).abs() < 1e-10);
    }

    #[test]
    fn diagonal_repeat_reports_multiplicity() {
        let c = classify_holonomy(&ProjectiveTransform::diag(2.0, 2.0, 0.25).unwrap(), 1e-6).unwrap();
        assert_eq!(c.kind, HolonomyKind::QuasiHyperbolic);
        assert_eq!(c.geometric_multiplicity, 2);
        assert!(!c.jordan_maximal);
    }

    #[test]
    fn rotation_is_rejected() {
        let (s, co) = 0.4f64.sin_cos();
        let r = t([[co, -s, 0.], [s, co, 0.], [0., 0., 1.]]);
        assert!(matches!(classify_holonomy(&r, 1e-6), Err(Error::NotPositiveSpectrum(_))));
        let neg = ProjectiveTransform::diag(-1.0, -2.0, 0.5).unwrap();
        assert!(classify_holonomy(&neg, 1e-6).is_err());
        assert!(classify_holonomy(&neg, 0.5).is_err());
    }
}
