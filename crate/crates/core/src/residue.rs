//! Residue of a cubic differential at a third-order pole → holonomy type of
//! the corresponding end.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::projective::HolonomyKind;

/// |Re R| and |R| below this are treated as exactly zero.
pub const ZERO_THRESHOLD: f64 = 1e-12;

/// Coefficients (p, q) of the depressed cubic λ³ + pλ + q whose roots are the
/// eigenvalue exponents: p = −3·2^{−2/3}|R|^{2/3}, q = −Im R.
pub fn cubic_coefficients(r: Complex64) -> (f64, f64) {
    (-3.0 * 2f64.powf(-2.0 / 3.0) * r.norm().powf(2.0 / 3.0), -r.im)
}

/// The three real roots of λ³ − 3·2^{−2/3}|R|^{2/3}λ − Im R = 0, ascending.
pub fn eigenvalue_exponents(r: Complex64) -> [f64; 3] {
    let (p, q) = cubic_coefficients(r);
    if r.norm() < ZERO_THRESHOLD {
        return [0.0; 3];
    }
    let m = 2.0 * (-p / 3.0).sqrt();
    let arg = ((3.0 * q / (2.0 * p)) * (-3.0 / p).sqrt()).clamp(-1.0, 1.0);
    let theta = arg.acos() / 3.0;
    let tau = 2.0 * std::f64::consts::PI / 3.0;
    let mut lam = [m * theta.cos(), m * (theta - tau).cos(), m * (theta - 2.0 * tau).cos()];
    let scale = m.max(1.0);
    for l in lam.iter_mut() {
        for _ in 0..8 {
            let f = *l * *l * *l + p * *l + q;
            let df = 3.0 * *l * *l + p;
            if f.abs() <= 1e-15 * scale.powi(3) || df.abs() < 1e-8 * scale * scale {
                break;
            }
            *l -= f / df;
        }
    }
    lam.sort_by(|a, b| a.partial_cmp(b).unwrap());
    if r.re.abs() < ZERO_THRESHOLD {
        // exact double root
        let (i, j) = if r.im > 0.0 { (0, 1) } else { (1, 2) };
        let mid = 0.5 * (lam[i] + lam[j]);
        lam[i] = mid;
        lam[j] = mid;
    }
    // enforce zero trace
    let s = (lam[0] + lam[1] + lam[2]) / 3.0;
    lam.map(|l| l - s)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EndClassification {
    /// [Re R, Im R]
    pub residue: [f64; 2],
    pub lambdas: [f64; 3],
    pub alphas: [f64; 3],
    pub kind: HolonomyKind,
    pub bulge_sign: i8,
}

pub fn classify_end(r: Complex64) -> EndClassification {
    let lambdas = eigenvalue_exponents(r);
    let alphas = lambdas.map(|l| (2.0 * std::f64::consts::PI * l).exp());
    let kind = if r.norm() < ZERO_THRESHOLD {
        HolonomyKind::Parabolic
    } else if r.re.abs() < ZERO_THRESHOLD {
        HolonomyKind::QuasiHyperbolic
    } else {
        HolonomyKind::Hyperbolic
    };
    let bulge_sign = if r.re.abs() < ZERO_THRESHOLD { 0 } else if r.re > 0.0 { 1 } else { -1 };
    EndClassification { residue: [r.re, r.im], lambdas, alphas, kind, bulge_sign }
}
