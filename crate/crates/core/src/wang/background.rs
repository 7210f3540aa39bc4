use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Background metric ρ(x)²|dℓ|² on a cylinder, ℓ = log z, x = Re ℓ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BackgroundKind {
    /// Constant density.
    Flat { density: f64 },
    /// Complete hyperbolic cusp ρ = 1/|x|, x < 0. `c` only enters through the
    /// grafted comparison metric used for the super-solution.
    Cusp { c: f64 },
    /// Hyperbolic collar of the plumbing zw = t, ρ = (π/|log t|)·csc(πx/log t).
    Collar { t: f64, c: f64 },
    /// The collar with a flat cylinder grafted into the window [log t − K, K].
    GraftedFlat { t: f64, c: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BackgroundParams {
    /// Overrides the default x interval.
    pub x_range: Option<[f64; 2]>,
    /// Grid spacing in x.
    pub step: f64,
}

impl Default for BackgroundParams {
    fn default() -> Self {
        BackgroundParams { x_range: None, step: 1e-3 }
    }
}

/// Distance kept from the ends x = log t and x = 0 where the hyperbolic
/// density blows up.
pub const END_MARGIN: f64 = 0.05;

/// Quintic smoothstep: 0 for s ≤ 0, 1 for s ≥ 1, C² in between.
/// Returns (value, first, second derivative).
fn smoothstep(s: f64) -> (f64, f64, f64) {
    if s <= 0.0 {
        (0.0, 0.0, 0.0)
    } else if s >= 1.0 {
        (1.0, 0.0, 0.0)
    } else {
        let s2 = s * s;
        (
            s2 * s * (10.0 - 15.0 * s + 6.0 * s2),
            30.0 * s2 * (1.0 - s) * (1.0 - s),
            60.0 * s * (1.0 - s) * (1.0 - 2.0 * s),
        )
    }
}

/// Cutoff η(a): 1 for a ≤ 2 log c, 0 for a ≥ log c, with derivatives.
pub fn cutoff(a: f64, c: f64) -> (f64, f64, f64) {
    let lc = c.ln();
    let (v, d1, d2) = smoothstep((lc - a) / (-lc));
    (v, d1 / lc, d2 / (lc * lc))
}

/// Window half-width K = (log t/π)·arcsin(2π log c/log t).
pub fn window_k(t: f64, c: f64) -> Result<f64> {
    let l = t.ln();
    let arg = 2.0 * PI * c.ln() / l;
    if !(arg > 0.0 && arg < 1.0) {
        return Err(Error::BadWindow(format!(
            "|log t| = {:.4} must exceed 2π|log c| = {:.4}",
            -l,
            -2.0 * PI * c.ln()
        )));
    }
    Ok(l / PI * arg.asin())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BackgroundMetric1D {
    pub kind: BackgroundKind,
    pub x_range: [f64; 2],
    pub x: Vec<f64>,
    pub rho: Vec<f64>,
    pub kappa: Vec<f64>,
}

/// Value, first and second derivative of log ρ for the hyperbolic metric.
fn hyperbolic_log_density(kind: &BackgroundKind, x: f64) -> Option<(f64, f64, f64)> {
    match *kind {
        BackgroundKind::Flat { .. } => None,
        BackgroundKind::Cusp { .. } => {
            let r = 1.0 / x.abs();
            Some((r.ln(), -1.0 / x, r * r))
        }
        BackgroundKind::Collar { t, .. } | BackgroundKind::GraftedFlat { t, .. } => {
            let l = t.ln();
            let a = PI * x / l;
            let k = PI / l.abs();
            let rho = k / a.sin();
            Some((rho.ln(), -(PI / l) / a.tan(), rho * rho))
        }
    }
}

impl BackgroundMetric1D {
    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn step(&self) -> f64 {
        (self.x_range[1] - self.x_range[0]) / (self.x.len() - 1) as f64
    }

    /// Whether the background has a hyperbolic comparison metric (and hence
    /// the sub/super-solution bracket applies).
    pub fn is_hyperbolic_type(&self) -> bool {
        !matches!(self.kind, BackgroundKind::Flat { .. })
    }

    /// Density of the complete hyperbolic metric at x, if any.
    pub fn hyperbolic_density(&self, x: f64) -> Option<f64> {
        hyperbolic_log_density(&self.kind, x).map(|(l, _, _)| l.exp())
    }

    /// Exponent φ(x) ∈ [0,1] of the geometric interpolation m = g^{1−φ}f^{φ}
    /// between hyperbolic g and flat f, with derivatives.
    pub fn graft_exponent(&self, x: f64) -> (f64, f64, f64) {
        match self.kind {
            BackgroundKind::Flat { .. } => (1.0, 0.0, 0.0),
            BackgroundKind::Cusp { c } => cutoff(x, c),
            BackgroundKind::Collar { t, c } | BackgroundKind::GraftedFlat { t, c } => {
                let l = t.ln();
                let lc = c.ln();
                let k = window_k(t, c).expect("validated at construction");
                let (a, a1, a2) = cutoff(x - k + 2.0 * lc, c);
                let (b, b1, b2) = cutoff(2.0 * lc + l - k - x, c);
                (a * b, a1 * b - a * b1, a2 * b - 2.0 * a1 * b1 + a * b2)
            }
        }
    }

    /// Density of the flat comparison metric (2 log c)^{−2}|dℓ|².
    pub fn flat_density(&self) -> f64 {
        match self.kind {
            BackgroundKind::Flat { density } => density,
            BackgroundKind::Cusp { c }
            | BackgroundKind::Collar { c, .. }
            | BackgroundKind::GraftedFlat { c, .. } => 1.0 / (-2.0 * c.ln()),
        }
    }

    /// log ρ_m of the grafted metric with first and second derivatives.
    pub fn grafted_log_density(&self, x: f64) -> (f64, f64, f64) {
        let lf = self.flat_density().ln();
        match hyperbolic_log_density(&self.kind, x) {
            None => (lf, 0.0, 0.0),
            Some((lg, lg1, lg2)) => {
                let (p, p1, p2) = self.graft_exponent(x);
                (
                    (1.0 - p) * lg + p * lf,
                    (1.0 - p) * lg1 + p1 * (lf - lg),
                    (1.0 - p) * lg2 - 2.0 * p1 * lg1 + p2 * (lf - lg),
                )
            }
        }
    }

    /// Gauss curvature −(log ρ_m)''/ρ_m² of the grafted metric.
    pub fn grafted_curvature(&self, x: f64) -> f64 {
        let (l, _, l2) = self.grafted_log_density(x);
        -l2 * (-2.0 * l).exp()
    }

    /// φ_log = 2 log(ρ_m/ρ_g), the grafted metric as a conformal factor over
    /// the hyperbolic one. Zero for flat backgrounds.
    pub fn graft_potential(&self, x: f64) -> f64 {
        match hyperbolic_log_density(&self.kind, x) {
            None => 0.0,
            Some((lg, _, _)) => 2.0 * (self.grafted_log_density(x).0 - lg),
        }
    }

    /// Index interval and linear weight for interpolating at x.
    pub(crate) fn locate(&self, x: f64) -> Option<(usize, f64)> {
        let n = self.x.len();
        let h = self.step();
        let s = (x - self.x[0]) / h;
        if s < -1e-6 || s > (n - 1) as f64 + 1e-6 {
            return None;
        }
        let i = (s.floor() as usize).min(n - 2);
        Some((i, (s - i as f64).clamp(0.0, 1.0)))
    }
}

fn validate(kind: &BackgroundKind) -> Result<()> {
    let plumbing = |t: f64, c: f64| -> Result<()> {
        if !(t > 0.0 && c > 0.0 && c < 1.0 && t < c * c) {
            return Err(Error::Invalid(format!("need 0 < t < c² < 1, got t = {t}, c = {c}")));
        }
        let k = window_k(t, c)?;
        let l = t.ln();
        if l - k >= k {
            return Err(Error::BadWindow(format!("flat window [{}, {}] is empty", l - k, k)));
        }
        let lc = c.ln();
        if k - lc > lc + 1e-12 || l - k + lc < l - lc - 1e-12 {
            return Err(Error::BadWindow("flat window leaves the collar".into()));
        }
        Ok(())
    };
    match *kind {
        BackgroundKind::Flat { density } => {
            if !(density > 0.0 && density.is_finite()) {
                return Err(Error::Invalid("flat density must be positive".into()));
            }
        }
        BackgroundKind::Cusp { c } => {
            if !(c > 0.0 && c < 1.0) {
                return Err(Error::Invalid(format!("need 0 < c < 1, got {c}")));
            }
        }
        BackgroundKind::Collar { t, c } | BackgroundKind::GraftedFlat { t, c } => plumbing(t, c)?,
    }
    Ok(())
}

fn default_range(kind: &BackgroundKind) -> [f64; 2] {
    match *kind {
        BackgroundKind::Flat { .. } => [-5.0, 5.0],
        BackgroundKind::Cusp { c } => [(8.0 * c.ln()).min(-10.0), -END_MARGIN],
        BackgroundKind::Collar { t, .. } | BackgroundKind::GraftedFlat { t, .. } => {
            [t.ln() + END_MARGIN, -END_MARGIN]
        }
    }
}

pub fn make_background(kind: BackgroundKind, params: BackgroundParams) -> Result<BackgroundMetric1D> {
    validate(&kind)?;
    let [a, b] = params.x_range.unwrap_or_else(|| default_range(&kind));
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(Error::Invalid(format!("bad x range [{a}, {b}]")));
    }
    let upper = match kind {
        BackgroundKind::Flat { .. } => f64::INFINITY,
        _ => 0.0,
    };
    let lower = match kind {
        BackgroundKind::Collar { t, .. } | BackgroundKind::GraftedFlat { t, .. } => t.ln(),
        _ => f64::NEG_INFINITY,
    };
    if b >= upper || a <= lower {
        return Err(Error::Invalid(format!("x range [{a}, {b}] must lie inside ({lower}, {upper})")));
    }
    if !(params.step > 0.0) {
        return Err(Error::Invalid("step must be positive".into()));
    }
    let cells = ((b - a) / params.step).ceil().max(4.0) as usize;
    if cells > 50_000_000 {
        return Err(Error::Invalid("too many grid points".into()));
    }
    let h = (b - a) / cells as f64;
    let x: Vec<f64> = (0..=cells).map(|i| a + h * i as f64).collect();
    let mut bg = BackgroundMetric1D { kind, x_range: [a, b], x, rho: Vec::new(), kappa: Vec::new() };
    let (rho, kappa) = bg
        .x
        .iter()
        .map(|&x| match kind {
            BackgroundKind::Flat { density } => (density, 0.0),
            BackgroundKind::Cusp { .. } | BackgroundKind::Collar { .. } => {
                (bg.hyperbolic_density(x).unwrap(), -1.0)
            }
            BackgroundKind::GraftedFlat { .. } => {
                (bg.grafted_log_density(x).0.exp(), bg.grafted_curvature(x))
            }
        })
        .unzip();
    bg.rho = rho;
    bg.kappa = kappa;
    Ok(bg)
}
