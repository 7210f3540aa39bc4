//! Projective geometry of RP²: points, SL(3,ℝ), convex domains, duality,
//! Hausdorff distance and holonomy classification.

mod domain;
mod dual;
mod hausdorff;
mod holonomy;
mod point;
mod svg;
mod transform;

pub use domain::{
    apply_transform, principal_cap, principal_inellipse, principal_triangle, principal_triangle_sampled, Chart, ConvexDomainApprox,
    MIN_SAMPLES,
};
pub use dual::dual_domain;
pub use hausdorff::{hausdorff_distance, hausdorff_distance_with, HausdorffEstimate, DEFAULT_RESOLUTION};
pub use holonomy::{classify_holonomy, HolonomyClass, HolonomyKind, DEFAULT_TOL};
pub use point::{fs_angle, fubini_study_distance, ProjectivePoint};
pub use svg::domains_svg;
pub use transform::{bulge_flow, principal_reflection, twist_bulge_matrix, ProjectiveTransform};

pub(crate) use domain::{convex_hull, diameter, polygon_contains, polygon_depth};
