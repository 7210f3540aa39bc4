//! Wang's equation Δu + 4‖U‖²e^{−2u} − 2e^u − 2κ = 0 for the Blaschke
//! conformal factor: rotationally reduced cylinder/collar problems and
//! polynomial cubic differentials on truncated disks.

mod background;
mod solve1d;
mod solve2d;

pub use background::{
    cutoff, make_background, window_k, BackgroundKind, BackgroundMetric1D, BackgroundParams, END_MARGIN,
};
pub use solve1d::{
    check_sub_super, constant_solution, solve_wang_1d, solve_wang_1d_with, BoundarySpec, SubSuperReport,
    Wang1dOptions, WangSolution1D, BRACKET_EPS,
};
pub use solve2d::{eval_poly, solve_wang_2d, solve_wang_2d_with, WangSolution2D, DEFAULT_N_THETA};
