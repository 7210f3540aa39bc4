//! Dirichlet problem det D²v = (−1/v)⁴ on planar convex domains, the
//! Blaschke metric and cubic form of the resulting affine sphere, the
//! Legendre transform and radial Blaschke lengths.

mod blaschke;
mod grid;
mod io;
mod legendre;
mod radial;
mod solver;

pub use blaschke::{blaschke_field, pick_norm_sq_from_jet, BlaschkeField, Jet3};
pub use grid::{GridDomain, GridMeta, DIRS};
pub use io::{solution_csv, solution_json};
pub use legendre::{legendre_transform, legendre_transform_values, LegendreTransform};
pub use radial::{cone_quant_fit, radial_blaschke_length, ConeQuantFit};
pub use solver::{solve_dirichlet, solve_dirichlet_with, Derivs, MASolution, MaOptions};
