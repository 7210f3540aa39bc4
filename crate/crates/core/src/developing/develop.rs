use std::f64::consts::PI;

use nalgebra::{DMatrix, Vector3};
use num_complex::Complex64;

use super::data::SphereData;
use super::frame::{integrate_frame, Frame, PathSpec};
use crate::error::{Error, Result};
use crate::projective::{
    convex_hull, diameter, fubini_study_distance, polygon_depth, Chart, ConvexDomainApprox, ProjectivePoint,
};

/// Images in RP² of the endpoints of `n_rays` radial paths from z = 0.
pub fn develop_rays(
    data: &dyn SphereData,
    frame0: &Frame,
    n_rays: usize,
    ray_length: f64,
    step: f64,
) -> Result<Vec<ProjectivePoint>> {
    if n_rays < 16 {
        return Err(Error::Invalid(format!("need at least 16 rays, got {n_rays}")));
    }
    if !(ray_length > 0.0 && ray_length.is_finite()) {
        return Err(Error::Invalid("ray length must be positive".into()));
    }
    let step = step.min(ray_length / 100.0);
    (0..n_rays)
        .map(|k| {
            let end = Complex64::from_polar(ray_length, 2.0 * PI * k as f64 / n_rays as f64);
            let f = integrate_frame(frame0, data, &PathSpec::straight(Complex64::new(0.0, 0.0), end), step)?;
            f.project()
        })
        .collect()
}

/// Convex hull of the developed ray endpoints. Endpoints lying inside the
/// hull by more than 1e−3 of its diameter mean the rays have not reached
/// the boundary, and give NotConvex.
pub fn develop_domain(
    data: &dyn SphereData,
    frame0: &Frame,
    n_rays: usize,
    ray_length: f64,
    step: f64,
) -> Result<ConvexDomainApprox> {
    let pts = develop_rays(data, frame0, n_rays, ray_length, step)?;
    hull_domain(&pts, n_rays)
}

/// Points are lifted by their affine-sphere representatives, which all lie
/// in one open cone.
pub(crate) fn hull_domain(pts: &[ProjectivePoint], n_samples: usize) -> Result<ConvexDomainApprox> {
    let lift: Vec<Vector3<f64>> = pts.iter().map(|p| p.rep()).collect();
    let mean: Vector3<f64> = lift.iter().sum();
    let lift: Vec<Vector3<f64>> = lift.into_iter().map(|x| if x.dot(&mean) < 0.0 { -x } else { x }).collect();
    let chart = Chart::along(lift.iter().sum()).map_err(|_| Error::NotProperlyConvex)?;
    let d = chart.direction();
    if lift.iter().any(|x| x.dot(&d) <= 1e-9) {
        return Err(Error::NotProperlyConvex);
    }
    let planar: Vec<[f64; 2]> = lift.iter().map(|x| chart.dehomogenize(x).unwrap()).collect();
    let hull = convex_hull(planar.clone());
    if hull.len() < 3 {
        return Err(Error::DegenerateDomain("developed points are collinear".into()));
    }
    let diam = diameter(&hull);
    let worst = planar.iter().map(|&q| polygon_depth(&hull, q)).fold(0.0, f64::max);
    if worst > 1e-3 * diam {
        return Err(Error::NotConvex(format!("endpoint {worst:.3e} inside the hull (diameter {diam:.3e})")));
    }
    let per_edge = n_samples.max(8).div_ceil(hull.len()).max(1);
    ConvexDomainApprox::polygon(chart, &hull, per_edge)
}

/// Smallest ray length (grown by 20% from `start`) at which every endpoint
/// moves less than 1e−3 in the Fubini-Study metric under a further 20%
/// increase. Returns None if `max` is reached first.
pub fn settle_ray_length(
    data: &dyn SphereData,
    frame0: &Frame,
    n_rays: usize,
    start: f64,
    max: f64,
    step: f64,
) -> Result<Option<f64>> {
    let mut l = start;
    let mut prev = develop_rays(data, frame0, n_rays, l, step)?;
    while 1.2 * l <= max {
        let next = develop_rays(data, frame0, n_rays, 1.2 * l, step)?;
        let moved = prev.iter().zip(&next).map(|(a, b)| fubini_study_distance(a, b)).fold(0.0, f64::max);
        if moved < 1e-3 {
            return Ok(Some(l));
        }
        l *= 1.2;
        prev = next;
    }
    Ok(None)
}

/// Groups cyclically ordered points into runs whose consecutive
/// Fubini-Study gaps stay below `threshold`, and returns the sizes of the
/// runs with at least `min_size` members. Isolated points in transit between
/// clusters are dropped.
pub fn extreme_clusters(points: &[ProjectivePoint], threshold: f64, min_size: usize) -> Vec<usize> {
    let n = points.len();
    if n == 0 {
        return Vec::new();
    }
    let gap = |i: usize| fubini_study_distance(&points[i], &points[(i + 1) % n]) >= threshold;
    let Some(start) = (0..n).find(|&i| gap(i)) else {
        return vec![n];
    };
    let mut sizes = Vec::new();
    let mut run = 0;
    for k in 1..=n {
        let i = (start + k) % n;
        run += 1;
        if gap(i) {
            sizes.push(run);
            run = 0;
        }
    }
    sizes.into_iter().filter(|&s| s >= min_size).collect()
}

/// Best-fit conic xᵀQx = 0 through unit representatives (smallest singular
/// vector of the design matrix). Returns the max |xᵀQx| with ‖Q‖_F = 1.
pub fn conic_fit_residual(points: &[ProjectivePoint]) -> f64 {
    let rows: Vec<[f64; 6]> = points
        .iter()
        .map(|p| {
            let x = p.rep();
            let r2 = 2f64.sqrt();
            [x[0] * x[0], x[1] * x[1], x[2] * x[2], r2 * x[0] * x[1], r2 * x[0] * x[2], r2 * x[1] * x[2]]
        })
        .collect();
    let a = DMatrix::from_fn(rows.len(), 6, |i, j| rows[i][j]);
    let ata = a.transpose() * &a;
    let eig = ata.symmetric_eigen();
    let (k, _) = eig.eigenvalues.iter().enumerate().fold((0, f64::INFINITY), |b, (i, &v)| if v < b.1 { (i, v) } else { b });
    let q = eig.eigenvectors.column(k);
    rows.iter().map(|r| r.iter().zip(q.iter()).map(|(a, b)| a * b).sum::<f64>().abs()).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::super::data::{ConstantData, HyperbolicDisk};
    use super::super::frame::{initial_frame, titeica_frame};
    use super::*;
    use crate::projective::{hausdorff_distance, principal_triangle};

    #[test]
    fn titeica_develops_onto_the_triangle() {
        let dom = develop_domain(&ConstantData::titeica(), &titeica_frame(), 64, 6.0, 5e-3).unwrap();
        let d = hausdorff_distance(&dom, &principal_triangle()).unwrap();
        assert!(d.value <= 0.05, "{d:?}");
    }

    #[test]
    fn poincare_disk_develops_onto_a_conic() {
        let psi0 = HyperbolicDisk.sample(Complex64::new(0.0, 0.0)).unwrap().psi;
        let pts = develop_rays(&HyperbolicDisk, &initial_frame(psi0).unwrap(), 32, 0.9, 1e-3).unwrap();
        assert!(conic_fit_residual(&pts) <= 1e-3);
        assert!(develop_domain(&HyperbolicDisk, &initial_frame(psi0).unwrap(), 32, 0.9, 1e-3).is_ok());
    }

    #[test]
    fn clusters_of_a_square() {
        let mut pts = Vec::new();
        for c in [[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0], [0.0, -1.0]] {
            for k in 0..5 {
                pts.push(ProjectivePoint::new(c[0] + 1e-3 * k as f64, c[1], 1.0).unwrap());
            }
        }
        assert_eq!(extreme_clusters(&pts, 0.1, 2), vec![5, 5, 5, 5]);
    }
}
