use serde::Serialize;

use super::solver::MASolution;
use crate::error::{Error, Result};

/// Bilinear interpolation of v and its Hessian from the four surrounding nodes.
fn interpolate(sol: &MASolution, hess: &[[f64; 3]], p: [f64; 2]) -> Option<(f64, [f64; 3])> {
    let g = sol.grid();
    let h = g.h();
    let (a, b) = (p[0] / h, p[1] / h);
    let (i, j) = (a.floor() as i64, b.floor() as i64);
    let (s, t) = (a - i as f64, b - j as f64);
    let k00 = g.index_of([i, j])?;
    let k10 = g.index_of([i + 1, j])?;
    let k01 = g.index_of([i, j + 1])?;
    let k11 = g.index_of([i + 1, j + 1])?;
    let wts = [(1.0 - s) * (1.0 - t), s * (1.0 - t), (1.0 - s) * t, s * t];
    let ks = [k00, k10, k01, k11];
    let mut v = 0.0;
    let mut hs = [0.0; 3];
    for (w, k) in wts.iter().zip(ks) {
        v += w * sol.v(k);
        for c in 0..3 {
            hs[c] += w * hess[k][c];
        }
    }
    Some((v, hs))
}

fn node_hessians(sol: &MASolution) -> Vec<[f64; 3]> {
    (0..sol.grid().len()).map(|k| sol.hessian(k)).collect()
}

/// Blaschke length of the segment from the minimum point of v to x, where x
/// is given in normalized coordinates (minimum at 0 with v(0) = −1).
///
/// The normalization x' = t(x − x_min), v' = t^{2/3}v with t = |v_min|^{−3/2}
/// is an isometry of Blaschke metrics, so the integral is taken along the
/// corresponding segment of the original grid.
pub fn radial_blaschke_length(sol: &MASolution, x: [f64; 2]) -> Result<f64> {
    let hess = node_hessians(sol);
    radial_length_with(sol, &hess, x)
}

fn radial_length_with(sol: &MASolution, hess: &[[f64; 3]], x: [f64; 2]) -> Result<f64> {
    let (xm, vm) = sol.minimum();
    let t = vm.abs().powf(-1.5);
    let dx = [x[0] / t, x[1] / t];
    let len = dx[0].hypot(dx[1]);
    if len == 0.0 {
        return Ok(0.0);
    }
    let h = sol.grid().h();
    let mut m = (len / h).ceil() as usize;
    m += m % 2;
    m = m.max(2);
    let f = |s: f64| -> Result<f64> {
        let p = [xm[0] + s * dx[0], xm[1] + s * dx[1]];
        let (v, hs) = interpolate(sol, hess, p).ok_or(Error::PathExits)?;
        let q = hs[0] * dx[0] * dx[0] + 2.0 * hs[1] * dx[0] * dx[1] + hs[2] * dx[1] * dx[1];
        Ok((-q / v).max(0.0).sqrt())
    };
    let ds = 1.0 / m as f64;
    let mut sum = f(0.0)? + f(1.0)?;
    for k in 1..m {
        sum += if k % 2 == 1 { 4.0 } else { 2.0 } * f(k as f64 * ds)?;
    }
    Ok(sum * ds / 3.0)
}

/// Empirical constants of ℓ(0, x) ≤ A − C·log|v(x)| over radial samples.
#[derive(Debug, Clone, Serialize)]
pub struct ConeQuantFit {
    pub a: f64,
    pub c: f64,
    /// (normalized radius, ℓ, −log|v|)
    pub samples: Vec<(f64, f64, f64)>,
    pub max_violation: f64,
}

/// Fits C by least squares and then lifts A until every sample satisfies the
/// inequality. Samples are taken along `n_dirs` rays at the given normalized
/// radii; points whose segment leaves the grid are skipped.
pub fn cone_quant_fit(sol: &MASolution, radii: &[f64], n_dirs: usize) -> Result<ConeQuantFit> {
    let hess = node_hessians(sol);
    let (xm, vm) = sol.minimum();
    let t = vm.abs().powf(-1.5);
    let mut samples = Vec::new();
    for d in 0..n_dirs.max(1) {
        let th = 2.0 * std::f64::consts::PI * d as f64 / n_dirs.max(1) as f64;
        for &r in radii {
            let x = [r * th.cos(), r * th.sin()];
            let Ok(ell) = radial_length_with(sol, &hess, x) else { continue };
            let p = [xm[0] + x[0] / t, xm[1] + x[1] / t];
            let Some(k) = sol.grid().nearest(p) else { continue };
            // v in normalized units
            let v = sol.v(k) * t.powf(2.0 / 3.0);
            samples.push((r, ell, -(v.abs()).ln()));
        }
    }
    if samples.len() < 2 {
        return Err(Error::PathExits);
    }
    let n = samples.len() as f64;
    let (mx, my) = samples.iter().fold((0.0, 0.0), |(a, b), s| (a + s.2 / n, b + s.1 / n));
    let sxx: f64 = samples.iter().map(|s| (s.2 - mx).powi(2)).sum();
    let sxy: f64 = samples.iter().map(|s| (s.2 - mx) * (s.1 - my)).sum();
    let c = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let a = samples.iter().map(|s| s.1 - c * s.2).fold(f64::NEG_INFINITY, f64::max);
    let max_violation = samples.iter().map(|s| s.1 - (a + c * s.2)).fold(f64::NEG_INFINITY, f64::max).max(0.0);
    Ok(ConeQuantFit { a, c, samples, max_violation })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monge_ampere::solve_dirichlet;
    use crate::projective::ConvexDomainApprox;

    #[test]
    fn disk_radial_length_is_hyperbolic() {
        let d = ConvexDomainApprox::disk([0.0, 0.0], 1.0, 1024).unwrap();
        let s = solve_dirichlet(&d, 1.0 / 32.0, 1e-9, 30).unwrap();
        assert_eq!(radial_blaschke_length(&s, [0.0, 0.0]).unwrap(), 0.0);
        let l = radial_blaschke_length(&s, [0.5, 0.0]).unwrap();
        assert!((l - 0.5f64.atanh()).abs() < 1e-3, "{l}");
        assert_eq!(radial_blaschke_length(&s, [1.5, 0.0]), Err(Error::PathExits));
    }

    #[test]
    fn shifted_disk_is_normalized() {
        // a disk of radius 2 centered off the origin has the same normalized lengths
        let d = ConvexDomainApprox::disk([0.5, -0.25], 2.0, 1024).unwrap();
        let s = solve_dirichlet(&d, 1.0 / 16.0, 1e-9, 30).unwrap();
        let l = radial_blaschke_length(&s, [0.0, 0.5]).unwrap();
        assert!((l - 0.5f64.atanh()).abs() < 1e-3, "{l}");
    }
}
