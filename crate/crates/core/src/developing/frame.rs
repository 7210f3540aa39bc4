use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::data::SphereData;
use crate::error::{Error, Result};
use crate::projective::ProjectivePoint;

/// Affine-sphere frame F = (f, f_z, f_z̄) with f_z̄ = conj(f_z).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Frame {
    pub f: [f64; 3],
    /// [re, im] of each component of f_z.
    pub fz: [[f64; 2]; 3],
    /// log of the metric density carried along the path, so that
    /// det F = (i/2)e^{psi_at}.
    pub psi_at: f64,
}

impl Frame {
    pub fn new(f: Vector3<f64>, fz: [Complex64; 3], psi_at: f64) -> Self {
        Frame { f: [f[0], f[1], f[2]], fz: fz.map(|c| [c.re, c.im]), psi_at }
    }

    pub fn position(&self) -> Vector3<f64> {
        Vector3::from(self.f)
    }

    pub fn fz(&self) -> [Complex64; 3] {
        self.fz.map(|c| Complex64::new(c[0], c[1]))
    }

    /// Columns f, f_z, conj(f_z).
    pub fn matrix(&self) -> Matrix3<Complex64> {
        let fz = self.fz();
        Matrix3::from_fn(|i, j| match j {
            0 => Complex64::new(self.f[i], 0.0),
            1 => fz[i],
            _ => fz[i].conj(),
        })
    }

    pub fn det(&self) -> Complex64 {
        self.matrix().determinant()
    }

    /// |det F − (i/2)e^ψ| / e^ψ.
    pub fn det_defect(&self) -> f64 {
        let e = self.psi_at.exp();
        (self.det() - Complex64::new(0.0, 0.5 * e)).norm() / e
    }

    pub fn project(&self) -> Result<ProjectivePoint> {
        ProjectivePoint::from_vector(self.position())
    }
}

/// f = (0,0,1), f_z = (e^{ψ₀/2}/2)(1, −i, 0).
pub fn initial_frame(psi0: f64) -> Result<Frame> {
    if !psi0.is_finite() {
        return Err(Error::Invalid("psi0 must be finite".into()));
    }
    let s = 0.5 * (0.5 * psi0).exp();
    let z = Complex64::new(0.0, 0.0);
    Ok(Frame::new(Vector3::new(0.0, 0.0, 1.0), [Complex64::new(s, 0.0), Complex64::new(0.0, -s), z], psi0))
}

/// Frame at z = 0 of f(z) = 3^{−1/2}(e^{2σ}, e^{−σ+√3τ}, e^{−σ−√3τ}).
pub fn titeica_frame() -> Frame {
    let a = 1.0 / 3f64.sqrt();
    let r3 = 3f64.sqrt();
    Frame::new(
        Vector3::new(a, a, a),
        [
            Complex64::new(a, 0.0),
            Complex64::new(-0.5 * a, -0.5 * a * r3),
            Complex64::new(-0.5 * a, 0.5 * a * r3),
        ],
        2f64.ln(),
    )
}

/// Closed form of the Ţiţeica embedding.
pub fn titeica_position(z: Complex64) -> Vector3<f64> {
    let (s, t) = (z.re, z.im);
    let r3 = 3f64.sqrt();
    Vector3::new((2.0 * s).exp(), (-s + r3 * t).exp(), (-s - r3 * t).exp()) / r3
}

/// Piecewise-linear path in the coordinate chart.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathSpec {
    /// Vertices as [re, im].
    pub points: Vec<[f64; 2]>,
}

impl PathSpec {
    pub fn polyline(points: &[Complex64]) -> Result<Self> {
        if points.is_empty() || points.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Invalid("path needs finite vertices".into()));
        }
        Ok(PathSpec { points: points.iter().map(|z| [z.re, z.im]).collect() })
    }

    pub fn straight(a: Complex64, b: Complex64) -> Self {
        PathSpec { points: vec![[a.re, a.im], [b.re, b.im]] }
    }

    pub fn vertices(&self) -> Vec<Complex64> {
        self.points.iter().map(|p| Complex64::new(p[0], p[1])).collect()
    }

    pub fn length(&self) -> f64 {
        self.vertices().windows(2).map(|w| (w[1] - w[0]).norm()).sum()
    }

    pub fn start(&self) -> Complex64 {
        self.vertices()[0]
    }

    pub fn end(&self) -> Complex64 {
        *self.vertices().last().unwrap()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegrationReport {
    pub steps: usize,
    /// max over steps of |det F − (i/2)e^ψ| / e^ψ
    pub max_det_defect: f64,
    /// |ψ(end) − ψ carried along the path|; measures how well the supplied
    /// ψ_z matches ψ.
    pub psi_mismatch: f64,
}

struct State {
    f: Vector3<f64>,
    fz: [Complex64; 3],
    chi: f64,
}

fn rhs(data: &dyn SphereData, z: Complex64, zdot: Complex64, s: &State) -> Result<State> {
    let d = data.sample(z)?;
    let e = d.psi.exp();
    let ue = d.cubic / e;
    let mut df = Vector3::zeros();
    let mut dfz = [Complex64::new(0.0, 0.0); 3];
    for k in 0..3 {
        df[k] = 2.0 * (s.fz[k] * zdot).re;
        dfz[k] = (d.psi_z * s.fz[k] + ue * s.fz[k].conj()) * zdot + 0.5 * e * s.f[k] * zdot.conj();
    }
    Ok(State { f: df, fz: dfz, chi: 2.0 * (d.psi_z * zdot).re })
}

fn axpy(s: &State, h: f64, k: &State) -> State {
    State {
        f: s.f + k.f * h,
        fz: [s.fz[0] + k.fz[0] * h, s.fz[1] + k.fz[1] * h, s.fz[2] + k.fz[2] * h],
        chi: s.chi + k.chi * h,
    }
}

/// Classical RK4 on F' = F·(A ż + B ż̄) along `path`, with steps of at most
/// `step` in |dz|. Fails if the determinant identity drifts.
pub fn integrate_frame(f0: &Frame, data: &dyn SphereData, path: &PathSpec, step: f64) -> Result<Frame> {
    integrate_frame_report(f0, data, path, step).map(|(f, _)| f)
}

pub fn integrate_frame_report(
    f0: &Frame,
    data: &dyn SphereData,
    path: &PathSpec,
    step: f64,
) -> Result<(Frame, IntegrationReport)> {
    let len = path.length();
    if !(step > 0.0) || (len > 0.0 && step > len / 100.0 + 1e-15) {
        return Err(Error::Invalid(format!("step {step} must be positive and at most length/100 = {}", len / 100.0)));
    }
    let mut s = State { f: f0.position(), fz: f0.fz(), chi: f0.psi_at };
    let mut steps = 0;
    let mut max_defect = f0.det_defect();
    let verts = path.vertices();
    for w in verts.windows(2) {
        let (a, b) = (w[0], w[1]);
        let seg = (b - a).norm();
        if seg == 0.0 {
            continue;
        }
        let n = (seg / step).ceil() as usize;
        let h = 1.0 / n as f64;
        let zdot = b - a;
        for k in 0..n {
            let t = k as f64 * h;
            let z = a + zdot * t;
            let k1 = rhs(data, z, zdot, &s)?;
            let k2 = rhs(data, z + zdot * (0.5 * h), zdot, &axpy(&s, 0.5 * h, &k1))?;
            let k3 = rhs(data, z + zdot * (0.5 * h), zdot, &axpy(&s, 0.5 * h, &k2))?;
            let k4 = rhs(data, z + zdot * h, zdot, &axpy(&s, h, &k3))?;
            for c in 0..3 {
                s.f[c] += h / 6.0 * (k1.f[c] + 2.0 * k2.f[c] + 2.0 * k3.f[c] + k4.f[c]);
                s.fz[c] += (k1.fz[c] + 2.0 * k2.fz[c] + 2.0 * k3.fz[c] + k4.fz[c]) * (h / 6.0);
            }
            s.chi += h / 6.0 * (k1.chi + 2.0 * k2.chi + 2.0 * k3.chi + k4.chi);
            steps += 1;
            let fr = Frame::new(s.f, s.fz, s.chi);
            let defect = fr.det_defect();
            max_defect = max_defect.max(defect);
            // allowed drift plus the rounding floor of a 3×3 determinant
            let cols = s.f.norm() * s.fz.iter().map(|c| c.norm_sqr()).sum::<f64>();
            let floor = 64.0 * f64::EPSILON * cols / s.chi.exp();
            if !(defect <= 1e-8 * (len + 1.0) + floor) {
                return Err(Error::InvariantDrift(format!("det F defect {defect:.3e} at z = {}", z + zdot * h)));
            }
        }
    }
    let end = data.sample(path.end())?;
    let frame = Frame::new(s.f, s.fz, s.chi);
    Ok((frame, IntegrationReport { steps, max_det_defect: max_defect, psi_mismatch: (end.psi - s.chi).abs() }))
}
