use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point of RP², stored as a unit-norm homogeneous representative.
///
/// The sign of the representative is kept: domains use it to record a
/// consistent lift of their boundary to the cone over the domain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 3]", into = "[f64; 3]")]
pub struct ProjectivePoint {
    rep: Vector3<f64>,
}

impl ProjectivePoint {
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        Self::from_vector(Vector3::new(x, y, z))
    }

    pub fn from_vector(v: Vector3<f64>) -> Result<Self> {
        let n = v.norm();
        if !n.is_finite() || n == 0.0 {
            return Err(Error::Invalid(format!("not a projective point: {v:?}")));
        }
        Ok(ProjectivePoint { rep: v / n })
    }

    pub fn rep(&self) -> Vector3<f64> {
        self.rep
    }

    pub fn negated(&self) -> Self {
        ProjectivePoint { rep: -self.rep }
    }

    pub fn to_array(&self) -> [f64; 3] {
        [self.rep.x, self.rep.y, self.rep.z]
    }
}

impl TryFrom<[f64; 3]> for ProjectivePoint {
    type Error = Error;
    fn try_from(a: [f64; 3]) -> Result<Self> {
        ProjectivePoint::new(a[0], a[1], a[2])
    }
}

impl From<ProjectivePoint> for [f64; 3] {
    fn from(p: ProjectivePoint) -> Self {
        p.to_array()
    }
}

/// Fubini-Study distance, in radians, in [0, π/2].
pub fn fubini_study_distance(p: &ProjectivePoint, q: &ProjectivePoint) -> f64 {
    fs_angle(&p.rep, &q.rep)
}

/// Fubini-Study angle between two nonzero vectors.
pub fn fs_angle(a: &Vector3<f64>, b: &Vector3<f64>) -> f64 {
    a.cross(b).norm().atan2(a.dot(b).abs())
}

/// Great-circle angle between two nonzero vectors (sign sensitive).
pub(crate) fn sphere_angle(a: &Vector3<f64>, b: &Vector3<f64>) -> f64 {
    a.cross(b).norm().atan2(a.dot(b))
}
