use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use super::domain::{polygon_contains, Chart, ConvexDomainApprox};
use super::point::{fs_angle, sphere_angle};
use crate::error::{Error, Result};

/// Hausdorff distance estimate with its resolution-dependent error bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HausdorffEstimate {
    pub value: f64,
    pub error_bound: f64,
}

/// Default maximum Fubini-Study gap between consecutive boundary samples.
pub const DEFAULT_RESOLUTION: f64 = 2e-3;

pub fn hausdorff_distance(a: &ConvexDomainApprox, b: &ConvexDomainApprox) -> Result<HausdorffEstimate> {
    hausdorff_distance_with(a, b, DEFAULT_RESOLUTION)
}

/// Symmetrized Hausdorff distance between the closed regions, in the
/// Fubini-Study metric. Boundaries are densified until consecutive samples are
/// at most `resolution` apart; the error bound is half the largest gap.
pub fn hausdorff_distance_with(
    a: &ConvexDomainApprox,
    b: &ConvexDomainApprox,
    resolution: f64,
) -> Result<HausdorffEstimate> {
    if !(resolution > 0.0) {
        return Err(Error::Invalid("resolution must be positive".into()));
    }
    let (la, lb) = (a.lift(), b.lift());
    let own = [a.chart().direction(), b.chart().direction()];
    let (chart, _) = Chart::select_with(&[&la, &lb], &own).ok_or(Error::ChartMismatch)?;
    let ra = Region::new(&la, &chart);
    let rb = Region::new(&lb, &chart);
    let (da, ga) = densify(&ra.lift, resolution);
    let (db, gb) = densify(&rb.lift, resolution);
    let ab = directed(&da, &rb);
    let ba = directed(&db, &ra);
    Ok(HausdorffEstimate { value: ab.max(ba), error_bound: 0.5 * ga.max(gb) })
}

struct Region {
    lift: Vec<Vector3<f64>>,
    poly: Vec<[f64; 2]>,
    chart: Chart,
    eps: f64,
}

impl Region {
    fn new(lift: &[Vector3<f64>], chart: &Chart) -> Self {
        let (_, flip) = chart.score(lift);
        let lift: Vec<Vector3<f64>> = lift.iter().map(|x| if flip { -x } else { *x }).collect();
        let mut poly: Vec<[f64; 2]> = lift.iter().map(|x| chart.dehomogenize(x).unwrap()).collect();
        if super::domain::signed_area(&poly) < 0.0 {
            poly.reverse();
        }
        let eps = 1e-12 * super::domain::diameter(&poly).max(1.0);
        Region { lift, poly, chart: *chart, eps }
    }

    fn contains(&self, x: &Vector3<f64>) -> bool {
        let d = self.chart.direction();
        let x = if x.dot(&d) < 0.0 { -x } else { *x };
        if x.dot(&d) <= 0.0 {
            return false;
        }
        polygon_contains(&self.poly, self.chart.dehomogenize(&x).unwrap(), self.eps)
    }

    /// Fubini-Study distance from x to the boundary curve.
    fn boundary_distance(&self, x: &Vector3<f64>) -> f64 {
        let n = self.lift.len();
        let mut best = f64::INFINITY;
        for i in 0..n {
            let (u, w) = (&self.lift[i], &self.lift[(i + 1) % n]);
            best = best.min(arc_distance(x, u, w)).min(arc_distance(&-x, u, w));
        }
        best
    }
}

/// Great-circle distance from unit-ish q to the short arc from u to w.
fn arc_distance(q: &Vector3<f64>, u: &Vector3<f64>, w: &Vector3<f64>) -> f64 {
    let q = q.normalize();
    let n = u.cross(w);
    let nn = n.norm();
    let ends = sphere_angle(&q, u).min(sphere_angle(&q, w));
    if nn < 1e-15 {
        return ends;
    }
    let n = n / nn;
    let qp = q - n * q.dot(&n);
    if qp.norm() < 1e-15 {
        return ends;
    }
    if u.cross(&qp).dot(&n) >= 0.0 && qp.cross(w).dot(&n) >= 0.0 {
        q.dot(&n).abs().asin().min(ends)
    } else {
        ends
    }
}

fn densify(lift: &[Vector3<f64>], resolution: f64) -> (Vec<Vector3<f64>>, f64) {
    let n = lift.len();
    let mut out = Vec::new();
    let mut gap: f64 = 0.0;
    for i in 0..n {
        let (u, w) = (lift[i], lift[(i + 1) % n]);
        let ang = fs_angle(&u, &w);
        let k = ((ang / resolution).ceil() as usize).max(1);
        for j in 0..k {
            let t = j as f64 / k as f64;
            out.push((u * (1.0 - t) + w * t).normalize());
        }
        gap = gap.max(ang / k as f64);
    }
    (out, gap)
}

fn directed(samples: &[Vector3<f64>], target: &Region) -> f64 {
    let mut sup: f64 = 0.0;
    for x in samples {
        if !target.contains(x) {
            sup = sup.max(target.boundary_distance(x));
        }
    }
    sup
}
