use serde::Serialize;

use crate::error::{Error, Result};
use crate::projective::ConvexDomainApprox;

/// Lattice directions used by the stencils: ±x, ±y, ±(1,1), ±(1,−1).
pub const DIRS: [[i64; 2]; 8] = [[1, 0], [-1, 0], [0, 1], [0, -1], [1, 1], [-1, -1], [1, -1], [-1, 1]];

/// Nodes closer than this fraction of h to the boundary are dropped.
const NODE_MARGIN: f64 = 1e-8;

#[derive(Debug, Clone, Copy)]
struct HalfPlane {
    n: [f64; 2],
    c: f64,
}

/// Uniform grid on the chart polygon of a domain, with cut-cell data.
#[derive(Debug, Clone)]
pub struct GridDomain {
    domain: ConvexDomainApprox,
    polygon: Vec<[f64; 2]>,
    planes: Vec<HalfPlane>,
    h: f64,
    nodes: Vec<[i64; 2]>,
    lo: [i64; 2],
    dims: [usize; 2],
    lookup: Vec<u32>,
    neighbors: Vec<[Option<u32>; 8]>,
    cuts: Vec<[f64; 8]>,
    bandwidth: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct GridMeta {
    pub h: f64,
    pub nodes: usize,
    pub chart_direction: [f64; 3],
}

impl GridDomain {
    pub fn new(domain: &ConvexDomainApprox, h: f64) -> Result<Self> {
        if !(h > 0.0) || !h.is_finite() {
            return Err(Error::Invalid(format!("grid spacing must be positive, got {h}")));
        }
        let polygon = domain.polygon_in_chart();
        let planes = half_planes(&polygon);
        let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
        for p in &polygon {
            for k in 0..2 {
                lo[k] = lo[k].min(p[k]);
                hi[k] = hi[k].max(p[k]);
            }
        }
        let ilo = [(lo[0] / h).floor() as i64, (lo[1] / h).floor() as i64];
        let ihi = [(hi[0] / h).ceil() as i64, (hi[1] / h).ceil() as i64];
        let dims = [(ihi[0] - ilo[0] + 1) as usize, (ihi[1] - ilo[1] + 1) as usize];
        if dims[0] * dims[1] > 50_000_000 {
            return Err(Error::Invalid(format!("grid of {}x{} nodes is too large", dims[0], dims[1])));
        }
        // order rows along the shorter side to keep the band narrow
        let rows_along_x = dims[0] <= dims[1];
        let mut nodes = Vec::new();
        let (outer, inner) = if rows_along_x { (1, 0) } else { (0, 1) };
        for a in 0..dims[outer] {
            for b in 0..dims[inner] {
                let mut ij = [0i64; 2];
                ij[outer] = ilo[outer] + a as i64;
                ij[inner] = ilo[inner] + b as i64;
                let p = [ij[0] as f64 * h, ij[1] as f64 * h];
                if depth(&planes, p) > NODE_MARGIN * h {
                    nodes.push(ij);
                }
            }
        }
        let mut lookup = vec![u32::MAX; dims[0] * dims[1]];
        for (k, ij) in nodes.iter().enumerate() {
            lookup[(ij[0] - ilo[0]) as usize * dims[1] + (ij[1] - ilo[1]) as usize] = k as u32;
        }
        let mut g = GridDomain {
            domain: domain.clone(),
            polygon,
            planes,
            h,
            nodes,
            lo: ilo,
            dims,
            lookup,
            neighbors: Vec::new(),
            cuts: Vec::new(),
            bandwidth: 0,
        };
        let mut neighbors = Vec::with_capacity(g.nodes.len());
        let mut cuts = Vec::with_capacity(g.nodes.len());
        let mut band = 0usize;
        for (k, ij) in g.nodes.iter().enumerate() {
            let p = g.position_of(*ij);
            let mut nb = [None; 8];
            let mut cut = [1.0; 8];
            for (d, dir) in DIRS.iter().enumerate() {
                let q = [ij[0] + dir[0], ij[1] + dir[1]];
                match g.index_of(q) {
                    Some(m) => {
                        nb[d] = Some(m as u32);
                        band = band.max(k.abs_diff(m));
                    }
                    None => {
                        let v = [dir[0] as f64 * h, dir[1] as f64 * h];
                        cut[d] = exit_fraction(&g.planes, p, v).clamp(f64::MIN_POSITIVE, 1.0);
                    }
                }
            }
            neighbors.push(nb);
            cuts.push(cut);
        }
        g.neighbors = neighbors;
        g.cuts = cuts;
        g.bandwidth = band;
        Ok(g)
    }

    pub fn domain(&self) -> &ConvexDomainApprox {
        &self.domain
    }

    pub fn polygon(&self) -> &[[f64; 2]] {
        &self.polygon
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn bandwidth(&self) -> usize {
        self.bandwidth
    }

    /// Integer lattice coordinates of node k (position = h·ij).
    pub fn lattice(&self, k: usize) -> [i64; 2] {
        self.nodes[k]
    }

    pub fn position(&self, k: usize) -> [f64; 2] {
        self.position_of(self.nodes[k])
    }

    fn position_of(&self, ij: [i64; 2]) -> [f64; 2] {
        [ij[0] as f64 * self.h, ij[1] as f64 * self.h]
    }

    pub fn index_of(&self, ij: [i64; 2]) -> Option<usize> {
        let a = ij[0] - self.lo[0];
        let b = ij[1] - self.lo[1];
        if a < 0 || b < 0 || a as usize >= self.dims[0] || b as usize >= self.dims[1] {
            return None;
        }
        let v = self.lookup[a as usize * self.dims[1] + b as usize];
        (v != u32::MAX).then_some(v as usize)
    }

    /// Node nearest to a chart point, if that lattice point is a node.
    pub fn nearest(&self, p: [f64; 2]) -> Option<usize> {
        self.index_of([(p[0] / self.h).round() as i64, (p[1] / self.h).round() as i64])
    }

    /// Neighbor in direction `d` (index into [`DIRS`]), if it is a node.
    pub fn neighbor(&self, k: usize, d: usize) -> Option<usize> {
        self.neighbors[k][d].map(|m| m as usize)
    }

    /// Fraction of the lattice step to the boundary in direction `d`
    /// (1 when the neighbor is a node).
    pub fn cut(&self, k: usize, d: usize) -> f64 {
        self.cuts[k][d]
    }

    /// Whether all eight neighbors of node k are nodes.
    pub fn is_full(&self, k: usize) -> bool {
        self.neighbors[k].iter().all(|n| n.is_some())
    }

    /// Euclidean distance from a chart point to the boundary (negative outside).
    pub fn depth(&self, p: [f64; 2]) -> f64 {
        depth(&self.planes, p)
    }

    /// Signed distance of node k to the boundary.
    pub fn node_depth(&self, k: usize) -> f64 {
        self.depth(self.position(k))
    }

    pub fn meta(&self) -> GridMeta {
        let d = self.domain.chart().direction();
        GridMeta { h: self.h, nodes: self.len(), chart_direction: [d.x, d.y, d.z] }
    }
}

fn half_planes(poly: &[[f64; 2]]) -> Vec<HalfPlane> {
    let n = poly.len();
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let (a, b) = (poly[i], poly[(i + 1) % n]);
        let e = [b[0] - a[0], b[1] - a[1]];
        let len = e[0].hypot(e[1]);
        if len < 1e-14 {
            continue;
        }
        let nrm = [e[1] / len, -e[0] / len];
        out.push(HalfPlane { n: nrm, c: nrm[0] * a[0] + nrm[1] * a[1] });
    }
    out
}

fn depth(planes: &[HalfPlane], p: [f64; 2]) -> f64 {
    planes.iter().map(|hp| hp.c - hp.n[0] * p[0] - hp.n[1] * p[1]).fold(f64::INFINITY, f64::min)
}

/// Smallest s > 0 with p + s·v on the boundary (p inside).
fn exit_fraction(planes: &[HalfPlane], p: [f64; 2], v: [f64; 2]) -> f64 {
    let mut s = f64::INFINITY;
    for hp in planes {
        let rate = hp.n[0] * v[0] + hp.n[1] * v[1];
        if rate > 0.0 {
            let gap = hp.c - hp.n[0] * p[0] - hp.n[1] * p[1];
            s = s.min(gap / rate);
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::projective::Chart;

    #[test]
    fn square_grid_cuts() {
        let sq = ConvexDomainApprox::polygon(Chart::standard(), &[[-1., -1.], [1., -1.], [1., 1.], [-1., 1.]], 2).unwrap();
        let g = GridDomain::new(&sq, 0.3).unwrap();
        // lattice points with |i|,|j| ≤ 3
        assert_eq!(g.len(), 49);
        let k = g.index_of([3, 0]).unwrap();
        assert!((g.cut(k, 0) - 0.1 / 0.3).abs() < 1e-12);
        assert_eq!(g.cut(k, 1), 1.0);
        let k = g.index_of([3, 3]).unwrap();
        assert!((g.cut(k, 4) - 0.1 / 0.3).abs() < 1e-12);
        for k in 0..g.len() {
            for d in 0..8 {
                let c = g.cut(k, d);
                assert!(c > 0.0 && c <= 1.0);
            }
            assert!(g.node_depth(k) > 0.0);
        }
    }

    #[test]
    fn band_is_about_one_row() {
        let d = ConvexDomainApprox::disk([0.0, 0.0], 1.0, 256).unwrap();
        let g = GridDomain::new(&d, 1.0 / 16.0).unwrap();
        assert!(g.bandwidth() <= 2 * 33 + 2, "{}", g.bandwidth());
        assert!(g.nearest([0.0, 0.0]).is_some());
    }
}
