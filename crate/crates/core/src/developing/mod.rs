//! Developing maps of hyperbolic affine spheres: the frame system
//! F_z = F·A, F_z̄ = F·B integrated along paths, developed domains and
//! holonomy of deck maps.

mod data;
mod develop;
mod frame;
mod holonomy;

pub use data::{ConstantData, DataSample, HyperbolicDisk, InterpolatedWang, SphereData};
pub use develop::{conic_fit_residual, develop_domain, develop_rays, extreme_clusters, settle_ray_length};
pub use frame::{
    initial_frame, integrate_frame, integrate_frame_report, titeica_frame, titeica_position, Frame,
    IntegrationReport, PathSpec,
};
pub use holonomy::{
    constant_coefficients, cylinder_frame, holonomy_affine_deck, holonomy_cylinder, holonomy_cylinder_report,
    HolonomyReport, DEFAULT_STEP,
};
