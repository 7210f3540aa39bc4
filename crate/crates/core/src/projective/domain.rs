use std::f64::consts::PI;

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use super::point::ProjectivePoint;
use super::transform::ProjectiveTransform;
use crate::error::{Error, Result};

/// An affine chart of RP²: the complement of the line ⟨x, d⟩ = 0, with
/// coordinates (⟨x,e1⟩, ⟨x,e2⟩)/⟨x,d⟩ for a right-handed frame (e1, e2, d).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Chart {
    direction: [f64; 3],
}

impl Chart {
    /// Coordinate chart; `index` is 1, 2 or 3.
    pub fn axis(index: usize, positive: bool) -> Result<Self> {
        if !(1..=3).contains(&index) {
            return Err(Error::Invalid(format!("chart index {index} not in 1..3")));
        }
        let mut d = [0.0; 3];
        d[index - 1] = if positive { 1.0 } else { -1.0 };
        Ok(Chart { direction: d })
    }

    /// The standard chart z = 1.
    pub fn standard() -> Self {
        Chart { direction: [0.0, 0.0, 1.0] }
    }

    pub fn along(d: Vector3<f64>) -> Result<Self> {
        let n = d.norm();
        if !(n > 0.0) || !n.is_finite() {
            return Err(Error::Invalid("chart direction must be nonzero".into()));
        }
        let u = d / n;
        Ok(Chart { direction: [u.x, u.y, u.z] })
    }

    pub fn direction(&self) -> Vector3<f64> {
        Vector3::from(self.direction)
    }

    /// Right-handed orthonormal frame (e1, e2, d).
    pub fn frame(&self) -> (Vector3<f64>, Vector3<f64>, Vector3<f64>) {
        let d = self.direction();
        let mut k = 0;
        for i in 1..3 {
            if d[i].abs() < d[k].abs() - 1e-15 {
                k = i;
            }
        }
        let a = Vector3::ith(k, 1.0);
        let e1 = (a - d * d.dot(&a)).normalize();
        let e2 = d.cross(&e1);
        (e1, e2, d)
    }

    pub fn dehomogenize(&self, x: &Vector3<f64>) -> Option<[f64; 2]> {
        let (e1, e2, d) = self.frame();
        let w = x.dot(&d);
        if w.abs() < 1e-300 {
            return None;
        }
        Some([x.dot(&e1) / w, x.dot(&e2) / w])
    }

    pub fn homogenize(&self, p: [f64; 2]) -> Vector3<f64> {
        let (e1, e2, d) = self.frame();
        e1 * p[0] + e2 * p[1] + d
    }

    pub fn point(&self, p: [f64; 2]) -> ProjectivePoint {
        ProjectivePoint::from_vector(self.homogenize(p)).expect("chart points are finite")
    }

    /// min ⟨x, d⟩/‖x‖ over a consistently lifted set of unit vectors, allowing
    /// a global sign flip of the lift. Returns (score, flip).
    pub(crate) fn score(&self, lift: &[Vector3<f64>]) -> (f64, bool) {
        let d = self.direction();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for x in lift {
            let s = x.dot(&d);
            lo = lo.min(s);
            hi = hi.max(s);
        }
        if lo >= -hi {
            (lo, false)
        } else {
            (-hi, true)
        }
    }

    fn candidates(lifts: &[&[Vector3<f64>]], extra: &[Vector3<f64>]) -> Vec<Chart> {
        let mut out = Vec::with_capacity(8 + extra.len());
        for k in 1..=3 {
            for pos in [true, false] {
                out.push(Chart::axis(k, pos).unwrap());
            }
        }
        let mut mean = Vector3::zeros();
        for l in lifts {
            for x in l.iter() {
                mean += x;
            }
        }
        if let Ok(c) = Chart::along(mean) {
            out.push(c);
        }
        out.extend(extra.iter().filter_map(|&d| Chart::along(d).ok()));
        out
    }

    /// Picks the chart that maximizes the worst-case margin over all lifts;
    /// ties go to the earlier candidate (coordinate axes first, in index order).
    pub(crate) fn select(lifts: &[&[Vector3<f64>]]) -> Option<(Chart, f64)> {
        Self::select_with(lifts, &[])
    }

    /// As [`select`](Self::select), also trying the given directions last.
    pub(crate) fn select_with(lifts: &[&[Vector3<f64>]], extra: &[Vector3<f64>]) -> Option<(Chart, f64)> {
        let mut best: Option<(Chart, f64)> = None;
        for c in Self::candidates(lifts, extra) {
            let s = lifts.iter().map(|l| c.score(l).0).fold(f64::INFINITY, f64::min);
            if best.map_or(true, |(_, b)| s > b + 1e-12) {
                best = Some((c, s));
            }
        }
        best.filter(|(_, s)| *s > 1e-9)
    }
}

/// Properly convex domain of RP² given by cyclically ordered boundary samples.
///
/// The stored representatives are lifted so that ⟨x, d⟩ > 0 for the chart
/// direction d, and the dehomogenized polygon is convex and counterclockwise.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvexDomainApprox {
    chart: Chart,
    boundary: Vec<ProjectivePoint>,
}

pub const MIN_SAMPLES: usize = 8;

impl ConvexDomainApprox {
    /// Builds a domain from boundary samples; picks a chart when none is given.
    pub fn from_boundary(points: Vec<ProjectivePoint>, chart: Option<Chart>) -> Result<Self> {
        if points.len() < MIN_SAMPLES {
            return Err(Error::Invalid(format!(
                "need at least {MIN_SAMPLES} boundary samples, got {}",
                points.len()
            )));
        }
        let lift = consistent_lift(&points);
        let chart = match chart {
            Some(c) => {
                if c.score(&lift).0 <= 1e-9 {
                    return Err(Error::NotProperlyConvex);
                }
                c
            }
            None => Chart::select(&[&lift]).ok_or(Error::NotProperlyConvex)?.0,
        };
        Self::in_chart(lift, chart)
    }

    fn in_chart(lift: Vec<Vector3<f64>>, chart: Chart) -> Result<Self> {
        let (_, flip) = chart.score(&lift);
        let d = chart.direction();
        let mut pts: Vec<Vector3<f64>> = lift.into_iter().map(|x| if flip { -x } else { x }).collect();
        if pts.iter().any(|x| x.dot(&d) <= 1e-9) {
            return Err(Error::NotProperlyConvex);
        }
        let mut poly: Vec<[f64; 2]> = pts.iter().map(|x| chart.dehomogenize(x).unwrap()).collect();
        let area = signed_area(&poly);
        let diam = diameter(&poly);
        if !(area.abs() > 1e-10 * diam * diam) {
            return Err(Error::DegenerateDomain("boundary samples are nearly collinear".into()));
        }
        if area < 0.0 {
            pts.reverse();
            poly.reverse();
        }
        check_convex(&poly)?;
        let boundary = pts.into_iter().map(|x| ProjectivePoint::from_vector(x).unwrap()).collect();
        Ok(ConvexDomainApprox { chart, boundary })
    }

    /// Convex polygon given by its vertices in a chart, each edge subdivided
    /// into `per_edge` pieces.
    pub fn polygon(chart: Chart, vertices: &[[f64; 2]], per_edge: usize) -> Result<Self> {
        let per_edge = per_edge.max(1);
        let n = vertices.len();
        if n < 3 {
            return Err(Error::Invalid("polygon needs at least 3 vertices".into()));
        }
        let mut pts = Vec::with_capacity(n * per_edge);
        for i in 0..n {
            let a = vertices[i];
            let b = vertices[(i + 1) % n];
            for k in 0..per_edge {
                let t = k as f64 / per_edge as f64;
                pts.push(chart.point([a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])]));
            }
        }
        Self::from_boundary(pts, Some(chart))
    }

    /// Ellipse (cx, cy) + R(θ)·(a cos t, b sin t) in a chart.
    pub fn ellipse(chart: Chart, center: [f64; 2], a: f64, b: f64, angle: f64, n: usize) -> Result<Self> {
        if !(a > 0.0 && b > 0.0) {
            return Err(Error::Invalid("ellipse semi-axes must be positive".into()));
        }
        let (s, c) = angle.sin_cos();
        let pts = (0..n)
            .map(|k| {
                let t = 2.0 * PI * k as f64 / n as f64;
                let (x, y) = (a * t.cos(), b * t.sin());
                chart.point([center[0] + c * x - s * y, center[1] + s * x + c * y])
            })
            .collect();
        Self::from_boundary(pts, Some(chart))
    }

    /// Disk in the standard chart z = 1.
    pub fn disk(center: [f64; 2], radius: f64, n: usize) -> Result<Self> {
        Self::ellipse(Chart::standard(), center, radius, radius, 0.0, n)
    }

    /// Regular n-gon inscribed in the circle of the given radius (chart z = 1),
    /// with a vertex on the positive x-axis.
    pub fn regular_polygon(n: usize, circumradius: f64, per_edge: usize) -> Result<Self> {
        let v: Vec<[f64; 2]> = (0..n)
            .map(|k| {
                let t = 2.0 * PI * k as f64 / n as f64;
                [circumradius * t.cos(), circumradius * t.sin()]
            })
            .collect();
        Self::polygon(Chart::standard(), &v, per_edge)
    }

    pub fn chart(&self) -> Chart {
        self.chart
    }

    pub fn boundary(&self) -> &[ProjectivePoint] {
        &self.boundary
    }

    pub fn len(&self) -> usize {
        self.boundary.len()
    }

    pub fn is_empty(&self) -> bool {
        self.boundary.is_empty()
    }

    /// Lifted unit representatives (⟨x, d⟩ > 0).
    pub fn lift(&self) -> Vec<Vector3<f64>> {
        self.boundary.iter().map(|p| p.rep()).collect()
    }

    /// Boundary polygon in the domain's own chart (counterclockwise).
    pub fn polygon_in_chart(&self) -> Vec<[f64; 2]> {
        self.boundary.iter().map(|p| self.chart.dehomogenize(&p.rep()).unwrap()).collect()
    }

    /// Boundary polygon in another chart, if the domain is bounded there.
    pub fn polygon_in(&self, chart: &Chart) -> Option<Vec<[f64; 2]>> {
        let lift = self.lift();
        let (s, flip) = chart.score(&lift);
        if s <= 1e-12 {
            return None;
        }
        let mut poly: Vec<[f64; 2]> =
            lift.iter().map(|x| chart.dehomogenize(&(if flip { -x } else { *x })).unwrap()).collect();
        if signed_area(&poly) < 0.0 {
            poly.reverse();
        }
        Some(poly)
    }

    pub fn with_chart(&self, chart: Chart) -> Result<Self> {
        Self::in_chart(self.lift(), chart)
    }

    /// Whether a point lies in the closed region (within `eps` in chart units).
    pub fn contains(&self, p: &ProjectivePoint, eps: f64) -> bool {
        let x = p.rep();
        let d = self.chart.direction();
        let x = if x.dot(&d) < 0.0 { -x } else { x };
        match self.chart.dehomogenize(&x) {
            Some(q) if x.dot(&d) > 0.0 => polygon_contains(&self.polygon_in_chart(), q, eps),
            _ => false,
        }
    }

    /// Image under a projective transformation, with a freshly selected chart.
    pub fn apply(&self, m: &ProjectiveTransform) -> Result<Self> {
        let lift: Vec<Vector3<f64>> = self.lift().iter().map(|x| (m.matrix() * x).normalize()).collect();
        // m^{-T}d pairs with m·x exactly as d does with x, so it always bounds the image
        let pushed = m.inverse().matrix().transpose() * self.chart.direction();
        let chart = Chart::select_with(&[&lift], &[pushed]).ok_or(Error::NotProperlyConvex)?.0;
        Self::in_chart(lift, chart)
    }

    /// Largest inscribed disk of the chart polygon: (center, radius).
    pub fn inscribed_disk(&self) -> ([f64; 2], f64) {
        largest_inscribed_disk(&self.polygon_in_chart())
    }
}

/// Apply a projective map to a domain, re-selecting the chart.
pub fn apply_transform(m: &ProjectiveTransform, omega: &ConvexDomainApprox) -> Result<ConvexDomainApprox> {
    omega.apply(m)
}

/// The projection of the first octant: vertices [1,0,0], [0,1,0], [0,0,1],
/// each edge sampled with 32 points, in the chart along [1,1,1].
pub fn principal_triangle() -> ConvexDomainApprox {
    principal_triangle_sampled(32)
}

pub fn principal_triangle_sampled(per_edge: usize) -> ConvexDomainApprox {
    let e = [Vector3::x(), Vector3::y(), Vector3::z()];
    let mut pts = Vec::new();
    for i in 0..3 {
        let (a, b) = (e[i], e[(i + 1) % 3]);
        for k in 0..per_edge {
            let t = k as f64 / per_edge as f64;
            pts.push(ProjectivePoint::from_vector(a * (1.0 - t) + b * t).unwrap());
        }
    }
    let chart = Chart::along(Vector3::new(1.0, 1.0, 1.0)).unwrap();
    ConvexDomainApprox::from_boundary(pts, Some(chart)).expect("principal triangle is valid")
}

/// The ellipse inscribed in the principal triangle tangent to each side at its
/// midpoint: the points [a², b², c²] with a + b + c = 0.
pub fn principal_inellipse(n: usize) -> ConvexDomainApprox {
    let pts = (0..n)
        .map(|k| {
            // t and t + π give the same point
            let t = PI * k as f64 / n as f64;
            let (a, b, c) = (t.cos(), (t + 2.0 * PI / 3.0).cos(), (t + 4.0 * PI / 3.0).cos());
            ProjectivePoint::new(a * a, b * b, c * c).unwrap()
        })
        .collect();
    let chart = Chart::along(Vector3::new(1.0, 1.0, 1.0)).unwrap();
    ConvexDomainApprox::from_boundary(pts, Some(chart)).expect("inellipse is valid")
}

/// The part of the principal triangle under the conic y² = 4xz: bounded by
/// the edge y = 0 and the arc [cos²φ, 2 cos φ sin φ, sin²φ], φ ∈ [0, π/2].
pub fn principal_cap(n: usize) -> ConvexDomainApprox {
    let n = n.max(MIN_SAMPLES);
    let mut pts = Vec::with_capacity(2 * n);
    for k in 0..n {
        let phi = 0.5 * PI * k as f64 / n as f64;
        let (c, s) = (phi.cos(), phi.sin());
        pts.push(ProjectivePoint::new(c * c, 2.0 * c * s, s * s).unwrap());
    }
    for k in 0..n {
        let t = k as f64 / n as f64;
        pts.push(ProjectivePoint::new(t, 0.0, 1.0 - t).unwrap());
    }
    let chart = Chart::along(Vector3::new(1.0, 1.0, 1.0)).unwrap();
    ConvexDomainApprox::from_boundary(pts, Some(chart)).expect("cap is valid")
}

/// Lift projective samples to unit vectors with ⟨x_i, x_{i+1}⟩ ≥ 0.
pub(crate) fn consistent_lift(points: &[ProjectivePoint]) -> Vec<Vector3<f64>> {
    let mut out: Vec<Vector3<f64>> = Vec::with_capacity(points.len());
    for p in points {
        let x = p.rep();
        match out.last() {
            Some(prev) if prev.dot(&x) < 0.0 => out.push(-x),
            _ => out.push(x),
        }
    }
    out
}

pub(crate) fn signed_area(poly: &[[f64; 2]]) -> f64 {
    let n = poly.len();
    let mut s = 0.0;
    for i in 0..n {
        let (a, b) = (poly[i], poly[(i + 1) % n]);
        s += a[0] * b[1] - a[1] * b[0];
    }
    0.5 * s
}

pub(crate) fn diameter(poly: &[[f64; 2]]) -> f64 {
    let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
    for p in poly {
        for k in 0..2 {
            lo[k] = lo[k].min(p[k]);
            hi[k] = hi[k].max(p[k]);
        }
    }
    (hi[0] - lo[0]).hypot(hi[1] - lo[1])
}

fn check_convex(poly: &[[f64; 2]]) -> Result<()> {
    let n = poly.len();
    let diam = diameter(poly);
    let mut turning = 0.0;
    for i in 0..n {
        let (a, b, c) = (poly[(i + n - 1) % n], poly[i], poly[(i + 1) % n]);
        let u = [b[0] - a[0], b[1] - a[1]];
        let v = [c[0] - b[0], c[1] - b[1]];
        let cross = u[0] * v[1] - u[1] * v[0];
        if cross < -1e-9 * diam * diam {
            return Err(Error::Invalid(format!("boundary polygon is not convex at sample {i}")));
        }
        let (nu, nv) = (u[0].hypot(u[1]), v[0].hypot(v[1]));
        if nu > 0.0 && nv > 0.0 {
            turning += cross.atan2(u[0] * v[0] + u[1] * v[1]);
        }
    }
    if (turning - 2.0 * PI).abs() > 1e-6 {
        return Err(Error::Invalid("boundary polygon winds more than once".into()));
    }
    Ok(())
}

/// Point in a counterclockwise convex polygon, with slack `eps`.
pub(crate) fn polygon_contains(poly: &[[f64; 2]], q: [f64; 2], eps: f64) -> bool {
    let n = poly.len();
    for i in 0..n {
        let (a, b) = (poly[i], poly[(i + 1) % n]);
        let e = [b[0] - a[0], b[1] - a[1]];
        let len = e[0].hypot(e[1]);
        if len == 0.0 {
            continue;
        }
        let s = (e[0] * (q[1] - a[1]) - e[1] * (q[0] - a[0])) / len;
        if s < -eps {
            return false;
        }
    }
    true
}

/// Signed distance from q to the boundary of a ccw convex polygon (positive inside).
pub(crate) fn polygon_depth(poly: &[[f64; 2]], q: [f64; 2]) -> f64 {
    let n = poly.len();
    let mut d = f64::INFINITY;
    for i in 0..n {
        let (a, b) = (poly[i], poly[(i + 1) % n]);
        let e = [b[0] - a[0], b[1] - a[1]];
        let len = e[0].hypot(e[1]);
        if len < 1e-14 {
            continue;
        }
        d = d.min((e[0] * (q[1] - a[1]) - e[1] * (q[0] - a[0])) / len);
    }
    d
}

/// Chebyshev center by subgradient-free pattern search on the depth function.
pub(crate) fn largest_inscribed_disk(poly: &[[f64; 2]]) -> ([f64; 2], f64) {
    let n = poly.len() as f64;
    let mut c = poly.iter().fold([0.0, 0.0], |s, p| [s[0] + p[0] / n, s[1] + p[1] / n]);
    let mut step = 0.25 * diameter(poly);
    let mut best = polygon_depth(poly, c);
    while step > 1e-13 * diameter(poly) {
        let mut moved = false;
        for k in 0..16 {
            let t = 2.0 * PI * k as f64 / 16.0;
            let q = [c[0] + step * t.cos(), c[1] + step * t.sin()];
            let d = polygon_depth(poly, q);
            if d > best {
                best = d;
                c = q;
                moved = true;
            }
        }
        if !moved {
            step *= 0.5;
        }
    }
    (c, best)
}

/// Andrew's monotone chain; counterclockwise, collinear points dropped.
pub(crate) fn convex_hull(mut pts: Vec<[f64; 2]>) -> Vec<[f64; 2]> {
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let cross = |o: [f64; 2], a: [f64; 2], b: [f64; 2]| (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
    let mut lower: Vec<[f64; 2]> = Vec::new();
    for p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], *p) <= 0.0 {
            lower.pop();
        }
        lower.push(*p);
    }
    let mut upper: Vec<[f64; 2]> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], *p) <= 0.0 {
            upper.pop();
        }
        upper.push(*p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}


#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chart_frames_are_right_handed() {
        for c in [
            Chart::standard(),
            Chart::axis(1, false).unwrap(),
            Chart::along(Vector3::new(1.0, 1.0, 1.0)).unwrap(),
        ] {
            let (e1, e2, d) = c.frame();
            assert!((e1.cross(&e2) - d).norm() < 1e-14);
            let x = Vector3::new(0.3, -0.2, 1.7);
            let p = c.dehomogenize(&x).unwrap();
            let y = c.homogenize(p);
            assert!(super::super::point::fs_angle(&x, &y) < 1e-14);
        }
        let (e1, e2, _) = Chart::standard().frame();
        assert_eq!(e1, Vector3::x());
        assert_eq!(e2, Vector3::y());
    }

    #[test]
    fn principal_triangle_contains_barycenter() {
        let t = principal_triangle();
        assert!(t.contains(&ProjectivePoint::new(1.0, 1.0, 1.0).unwrap(), 0.0));
        assert!(t.contains(&ProjectivePoint::new(-1.0, -2.0, -1.0).unwrap(), 0.0));
        assert!(!t.contains(&ProjectivePoint::new(1.0, -0.1, 1.0).unwrap(), 1e-12));
    }

    #[test]
    fn rejects_bad_input() {
        let few: Vec<_> = (0..5).map(|k| Chart::standard().point([k as f64, 1.0])).collect();
        assert!(matches!(ConvexDomainApprox::from_boundary(few, None), Err(Error::Invalid(_))));
        let star: Vec<[f64; 2]> = (0..10)
            .map(|k| {
                let t = 2.0 * PI * k as f64 / 10.0;
                let r = if k % 2 == 0 { 1.0 } else { 0.4 };
                [r * t.cos(), r * t.sin()]
            })
            .collect();
        assert!(ConvexDomainApprox::polygon(Chart::standard(), &star, 1).is_err());
        let line: Vec<_> = (0..10).map(|k| Chart::standard().point([k as f64, 0.0])).collect();
        assert!(ConvexDomainApprox::from_boundary(line, Some(Chart::standard())).is_err());
    }

    #[test]
    fn sliver_is_degenerate() {
        let v = [[0.0, 0.0], [1.0, 0.0], [1.0, 1e-12], [0.0, 1e-12]];
        let r = ConvexDomainApprox::polygon(Chart::standard(), &v, 3);
        assert!(matches!(r, Err(Error::DegenerateDomain(_))));
    }

    #[test]
    fn clockwise_input_is_reoriented() {
        let d = ConvexDomainApprox::disk([0.0, 0.0], 1.0, 16).unwrap();
        let mut rev: Vec<_> = d.boundary().to_vec();
        rev.reverse();
        let e = ConvexDomainApprox::from_boundary(rev, Some(Chart::standard())).unwrap();
        assert!(signed_area(&e.polygon_in_chart()) > 0.0);
    }

    #[test]
    fn inscribed_disk_of_square_and_triangle() {
        let sq = ConvexDomainApprox::polygon(Chart::standard(), &[[-1., -1.], [1., -1.], [1., 1.], [-1., 1.]], 4).unwrap();
        let (c, r) = sq.inscribed_disk();
        assert!(c[0].abs() < 1e-9 && c[1].abs() < 1e-9 && (r - 1.0).abs() < 1e-9);
        let tri = ConvexDomainApprox::polygon(Chart::standard(), &[[0., 0.], [1., 0.], [0., 1.]], 4).unwrap();
        let (_, r) = tri.inscribed_disk();
        assert!((r - 1.0 / (2.0 + 2f64.sqrt())).abs() < 1e-9);
    }

    #[test]
    fn inellipse_is_tangent_at_midpoints() {
        let e = principal_inellipse(96);
        let t = principal_triangle();
        for p in e.boundary() {
            assert!(t.contains(p, 1e-12));
        }
        let m = ProjectivePoint::new(1.0, 0.0, 1.0).unwrap();
        let near = e.boundary().iter().map(|p| super::super::point::fubini_study_distance(p, &m)).fold(1.0, f64::min);
        assert!(near < 1e-12);
    }
}

