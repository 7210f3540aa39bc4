use serde::Serialize;

use super::solver::MASolution;
use crate::error::{Error, Result};

/// Derivatives of v up to third order at a point.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct Jet3 {
    pub v: f64,
    pub d1: [f64; 2],
    /// [v_xx, v_xy, v_yy]
    pub d2: [f64; 3],
    /// [v_xxx, v_xxy, v_xyy, v_yyy]
    pub d3: [f64; 4],
}

impl Jet3 {
    fn second(&self, i: usize, j: usize) -> f64 {
        self.d2[i + j]
    }

    fn third(&self, i: usize, j: usize, k: usize) -> f64 {
        self.d3[i + j + k]
    }

    /// Blaschke metric h_ij = −v_ij / v as [h11, h12, h22].
    pub fn metric(&self) -> [f64; 3] {
        [-self.d2[0] / self.v, -self.d2[1] / self.v, -self.d2[2] / self.v]
    }
}

/// ‖U‖²_h = |C|²_h / 4 where C is the difference between the flat connection
/// of the radial graph of −1/v and the Levi-Civita connection of h.
pub fn pick_norm_sq_from_jet(j: &Jet3) -> f64 {
    let v = j.v;
    let h = |a: usize, b: usize| -j.second(a, b) / v;
    // ∂_k h_ab
    let dh = |a: usize, b: usize, k: usize| -j.third(a, b, k) / v + j.second(a, b) * j.d1[k] / (v * v);
    let det = h(0, 0) * h(1, 1) - h(0, 1) * h(0, 1);
    let hinv = [[h(1, 1) / det, -h(0, 1) / det], [-h(0, 1) / det, h(0, 0) / det]];
    let mut c = [[[0.0; 2]; 2]; 2];
    for (a, ca) in c.iter_mut().enumerate() {
        for (b, cab) in ca.iter_mut().enumerate() {
            for (l, cabl) in cab.iter_mut().enumerate() {
                let flat = -(j.d1[a] * h(l, b) + j.d1[b] * h(l, a)) / v;
                let lc = 0.5 * (dh(b, l, a) + dh(a, l, b) - dh(a, b, l));
                *cabl = flat - lc;
            }
        }
    }
    let mut n2 = 0.0;
    for a in 0..2 {
        for b in 0..2 {
            for l in 0..2 {
                for x in 0..2 {
                    for y in 0..2 {
                        for z in 0..2 {
                            n2 += hinv[a][x] * hinv[b][y] * hinv[l][z] * c[a][b][l] * c[x][y][z];
                        }
                    }
                }
            }
        }
    }
    n2 / 4.0
}

/// Blaschke metric and cubic-form norm on nodes at least 2h from ∂Ω.
#[derive(Debug, Clone, Serialize)]
pub struct BlaschkeField {
    pub nodes: Vec<usize>,
    pub positions: Vec<[f64; 2]>,
    /// [h11, h12, h22] per node
    pub metric: Vec<[f64; 3]>,
    pub pick_norm_sq: Vec<f64>,
}

impl BlaschkeField {
    pub fn median_pick_norm_sq(&self) -> f64 {
        median(&self.pick_norm_sq)
    }
}

pub(crate) fn median(xs: &[f64]) -> f64 {
    let mut s = xs.to_vec();
    s.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = s.len();
    if n == 0 {
        return f64::NAN;
    }
    if n % 2 == 1 {
        s[n / 2]
    } else {
        0.5 * (s[n / 2 - 1] + s[n / 2])
    }
}

/// Centered differences of v up to third order at node k, if the 5-point
/// axis arms and the diagonal neighbors are all nodes.
pub(crate) fn centered_jet(sol: &MASolution, v: &[f64], k: usize) -> Option<Jet3> {
    let g = sol.grid();
    let h = g.h();
    let [i, j] = g.lattice(k);
    let at = |a: i64, b: i64| g.index_of([i + a, j + b]).map(|m| v[m]);
    let f = |a: i64, b: i64| at(a, b);
    let (c, e, w, n, s) = (v[k], f(1, 0)?, f(-1, 0)?, f(0, 1)?, f(0, -1)?);
    let (ne, nw, se, sw) = (f(1, 1)?, f(-1, 1)?, f(1, -1)?, f(-1, -1)?);
    let (ee, ww, nn, ss) = (f(2, 0)?, f(-2, 0)?, f(0, 2)?, f(0, -2)?);
    let h2 = h * h;
    let h3 = h2 * h;
    Some(Jet3 {
        v: c,
        d1: [(e - w) / (2.0 * h), (n - s) / (2.0 * h)],
        d2: [(e - 2.0 * c + w) / h2, (ne - nw - se + sw) / (4.0 * h2), (n - 2.0 * c + s) / h2],
        d3: [
            (ee - 2.0 * e + 2.0 * w - ww) / (2.0 * h3),
            ((ne - 2.0 * n + nw) - (se - 2.0 * s + sw)) / (2.0 * h3),
            ((ne - 2.0 * e + se) - (nw - 2.0 * w + sw)) / (2.0 * h3),
            (nn - 2.0 * n + 2.0 * s - ss) / (2.0 * h3),
        ],
    })
}

pub fn blaschke_field(sol: &MASolution) -> Result<BlaschkeField> {
    let g = sol.grid();
    let v = sol.values();
    let mut out = BlaschkeField { nodes: Vec::new(), positions: Vec::new(), metric: Vec::new(), pick_norm_sq: Vec::new() };
    for k in 0..g.len() {
        if g.node_depth(k) < 2.0 * g.h() {
            continue;
        }
        if let Some(jet) = centered_jet(sol, &v, k) {
            out.nodes.push(k);
            out.positions.push(g.position(k));
            out.metric.push(jet.metric());
            out.pick_norm_sq.push(pick_norm_sq_from_jet(&jet));
        }
    }
    if out.nodes.len() < 25 {
        return Err(Error::TooCoarse(format!("{} nodes at distance ≥ 2h from the boundary (need 25)", out.nodes.len())));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Analytic 3-jet of −√(1 − x² − y²).
    fn disk_jet(x: f64, y: f64) -> Jet3 {
        let s = 1.0 - x * x - y * y;
        let r = s.sqrt();
        let r3 = s * r;
        let r5 = r3 * s;
        Jet3 {
            v: -r,
            d1: [x / r, y / r],
            d2: [1.0 / r + x * x / r3, x * y / r3, 1.0 / r + y * y / r3],
            d3: [
                3.0 * x / r3 + 3.0 * x * x * x / r5,
                y / r3 + 3.0 * x * x * y / r5,
                x / r3 + 3.0 * x * y * y / r5,
                3.0 * y / r3 + 3.0 * y * y * y / r5,
            ],
        }
    }

    /// Analytic 3-jet of −√3·(xy(1−x−y))^{1/3}, computed by differentiating
    /// v = −√3·g^{1/3} with g = xy(1 − x − y).
    fn triangle_jet(x: f64, y: f64) -> Jet3 {
        let g = x * y * (1.0 - x - y);
        let gx = y * (1.0 - 2.0 * x - y);
        let gy = x * (1.0 - x - 2.0 * y);
        let (gxx, gxy, gyy) = (-2.0 * y, 1.0 - 2.0 * x - 2.0 * y, -2.0 * x);
        let (gxxy, gxyy) = (-2.0, -2.0);
        let k = -3f64.sqrt();
        // derivatives of φ(g) = g^{1/3}
        let f1 = g.powf(-2.0 / 3.0) / 3.0;
        let f2 = -2.0 / 9.0 * g.powf(-5.0 / 3.0);
        let f3 = 10.0 / 27.0 * g.powf(-8.0 / 3.0);
        let d1 = [k * f1 * gx, k * f1 * gy];
        let second = |a: f64, b: f64, ab: f64| k * (f2 * a * b + f1 * ab);
        let third = |a: f64, b: f64, c: f64, ab: f64, ac: f64, bc: f64, abc: f64| {
            k * (f3 * a * b * c + f2 * (ab * c + ac * b + bc * a) + f1 * abc)
        };
        Jet3 {
            v: k * g.cbrt(),
            d1,
            d2: [second(gx, gx, gxx), second(gx, gy, gxy), second(gy, gy, gyy)],
            d3: [
                third(gx, gx, gx, gxx, gxx, gxx, 0.0),
                third(gx, gx, gy, gxx, gxy, gxy, gxxy),
                third(gx, gy, gy, gxy, gxy, gyy, gxyy),
                third(gy, gy, gy, gyy, gyy, gyy, 0.0),
            ],
        }
    }

    #[test]
    fn hyperboloid_has_zero_cubic_form() {
        for (x, y) in [(0.0, 0.0), (0.3, -0.4), (0.7, 0.1)] {
            assert!(pick_norm_sq_from_jet(&disk_jet(x, y)).abs() < 1e-12);
        }
    }

    #[test]
    fn titeica_surface_has_constant_half() {
        for (x, y) in [(1.0 / 3.0, 1.0 / 3.0), (0.1, 0.2), (0.6, 0.05)] {
            let j = triangle_jet(x, y);
            // the Ţiţeica potential solves the equation exactly
            let det = j.d2[0] * j.d2[2] - j.d2[1] * j.d2[1];
            assert!((det * j.v.powi(4) - 1.0).abs() < 1e-10);
            assert!((pick_norm_sq_from_jet(&j) - 0.5).abs() < 1e-10);
        }
    }

    #[test]
    fn disk_metric_is_klein() {
        let m = disk_jet(0.5, 0.0).metric();
        assert!((m[0] - 1.0 / 0.75f64.powi(2)).abs() < 1e-12);
        assert!((m[2] - 1.0 / 0.75).abs() < 1e-12);
    }
}
