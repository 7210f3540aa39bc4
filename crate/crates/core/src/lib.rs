//! Hyperbolic affine spheres and convex RP² structures: Monge-Ampère and Wang
//! equation solvers, developing maps, holonomy and the residue dictionary.

pub mod developing;
pub mod error;
pub mod experiments;
pub mod linalg;
pub mod monge_ampere;
pub mod projective;
pub mod residue;
pub mod wang;

pub use error::{Error, Result};
