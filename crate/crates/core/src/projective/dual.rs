use nalgebra::Vector3;

use super::domain::{Chart, ConvexDomainApprox, MIN_SAMPLES};
use super::point::ProjectivePoint;
use crate::error::{Error, Result};

/// The dual domain: the projectivized dual cone {ξ : ξ(x) > 0 on the closed cone}.
///
/// For a sampled boundary the dual is the polygon whose vertices are the
/// supporting planes x_i × x_{i+1} of consecutive samples; runs of equal
/// normals (samples along a flat side) are merged and the result is resampled
/// so that it has at least as many points as the input.
pub fn dual_domain(omega: &ConvexDomainApprox) -> Result<ConvexDomainApprox> {
    let lift = omega.lift();
    let n = lift.len();
    let centroid = lift.iter().fold(Vector3::zeros(), |s, x| s + x);
    let scale = lift.iter().fold(0.0f64, |m, x| m.max(x.norm()));
    let mut normals: Vec<Vector3<f64>> = Vec::with_capacity(n);
    for i in 0..n {
        let c = lift[i].cross(&lift[(i + 1) % n]);
        if c.norm() <= 1e-13 * scale * scale {
            continue;
        }
        let c = c.normalize();
        let c = if c.dot(&centroid) < 0.0 { -c } else { c };
        if let Some(prev) = normals.last() {
            if (prev - c).norm() < 1e-12 {
                continue;
            }
        }
        normals.push(c);
    }
    while normals.len() > 1 && (normals[0] - normals[normals.len() - 1]).norm() < 1e-12 {
        normals.pop();
    }
    if normals.len() < 3 {
        return Err(Error::DegenerateDomain("fewer than three distinct supporting lines".into()));
    }
    let target = n.max(MIN_SAMPLES);
    let pts = resample(&normals, target);
    let lifted: Vec<Vector3<f64>> = pts.iter().map(|p| p.rep()).collect();
    // any interior point of Ω is positive on the closed dual cone, so the
    // chart along the centroid always bounds the dual
    let chart =
        Chart::select_with(&[&lifted], &[centroid]).ok_or(Error::DegenerateDomain("dual is not properly convex".into()))?.0;
    ConvexDomainApprox::from_boundary(pts, Some(chart)).map_err(|e| match e {
        Error::Invalid(m) => Error::DegenerateDomain(m),
        other => other,
    })
}

/// Subdivide the closed polygon with the given vertices (projective segments)
/// until it has at least `target` points; vertices are always kept.
fn resample(vertices: &[Vector3<f64>], target: usize) -> Vec<ProjectivePoint> {
    let m = vertices.len();
    let per_edge = target.div_ceil(m).max(1);
    let mut out = Vec::with_capacity(m * per_edge);
    for i in 0..m {
        let (a, b) = (vertices[i], vertices[(i + 1) % m]);
        for k in 0..per_edge {
            let t = k as f64 / per_edge as f64;
            out.push(ProjectivePoint::from_vector(a * (1.0 - t) + b * t).unwrap());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::projective::domain::principal_triangle;
    use crate::projective::hausdorff::hausdorff_distance;

    #[test]
    fn triangle_is_self_dual() {
        let t = principal_triangle();
        let d = dual_domain(&t).unwrap();
        assert!(hausdorff_distance(&t, &d).unwrap().value < 1e-12);
    }

    #[test]
    fn unit_disk_is_self_dual() {
        let n = 4096;
        let disk = ConvexDomainApprox::disk([0.0, 0.0], 1.0, n).unwrap();
        let d = dual_domain(&disk).unwrap();
        // dual vertices are the tangent-line coordinates [cos, sin, -1] ~ the
        // polar circle; brute-force check in the chart z = 1
        for p in d.boundary() {
            let q = Chart::standard().dehomogenize(&p.rep()).unwrap();
            let r = q[0].hypot(q[1]);
            assert!((r - 1.0).abs() < 1e-5, "r = {r}");
        }
    }

    #[test]
    fn nested_disks_reverse_inclusion() {
        let small = ConvexDomainApprox::disk([0.0, 0.0], 0.5, 64).unwrap();
        let big = ConvexDomainApprox::disk([0.0, 0.0], 1.0, 64).unwrap();
        let (ds, db) = (dual_domain(&small).unwrap(), dual_domain(&big).unwrap());
        for p in db.boundary() {
            assert!(ds.contains(p, 1e-12));
        }
    }
}
