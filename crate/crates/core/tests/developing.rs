use std::f64::consts::PI;

use asl::developing::{
    develop_domain, holonomy_affine_deck, initial_frame, integrate_frame, integrate_frame_report, titeica_frame,
    titeica_position, ConstantData, InterpolatedWang, PathSpec,
};
use asl::projective::{hausdorff_distance, principal_triangle};
use asl::wang::solve_wang_2d_with;
use nalgebra::Matrix3;
use num_complex::Complex64;

fn z(a: f64, b: f64) -> Complex64 {
    Complex64::new(a, b)
}

#[test]
fn titeica_error_is_fourth_order() {
    let d = ConstantData::titeica();
    let end = z(2.0, 1.0);
    let path = PathSpec::straight(z(0.0, 0.0), end);
    let err = |h: f64| (integrate_frame(&titeica_frame(), &d, &path, h).unwrap().position() - titeica_position(end)).norm();
    let (e1, e2, e3) = (err(0.02), err(0.01), err(0.005));
    let (o1, o2) = ((e1 / e2).log2(), (e2 / e3).log2());
    assert!(o1 >= 3.5 && o2 >= 3.5, "{e1:e} {e2:e} {e3:e}");
}

#[test]
fn determinant_is_conserved_on_a_loop() {
    let d = ConstantData::titeica();
    let square = PathSpec::polyline(&[z(0., 0.), z(1.5, 0.), z(1.5, 1.5), z(0., 1.5), z(0., 0.)]).unwrap();
    let (f, rep) = integrate_frame_report(&titeica_frame(), &d, &square, 1e-3).unwrap();
    assert!(rep.max_det_defect < 1e-9, "{rep:?}");
    // trivial topology: the loop closes up
    assert!((f.matrix() - titeica_frame().matrix()).norm() < 1e-8);
}

#[test]
fn titeica_rays_fill_the_triangle() {
    let dom = develop_domain(&ConstantData::titeica(), &titeica_frame(), 96, 6.0, 5e-3).unwrap();
    assert!(hausdorff_distance(&dom, &principal_triangle()).unwrap().value <= 0.05);
}

/// ‖G⁶ − I‖ for the deck rotation by π/3 of U = z³ solved at spacing h.
fn rotation_defect(h: f64, n_theta: usize) -> f64 {
    // ψ(e^{iπ/3}z) = ψ(z), so the rotation is an automorphism of the data;
    // G⁶ = I up to the failure of the discrete data to be exactly flat
    let coeffs = [z(0., 0.), z(0., 0.), z(0., 0.), z(1., 0.)];
    let sol = solve_wang_2d_with(&coeffs, 3.0, h, 1e-11, n_theta).unwrap();
    let data = InterpolatedWang::new(&sol);
    let z0 = z(0.8, 0.3);
    let f0 = initial_frame(sol.center_value()).unwrap();
    let f1 = integrate_frame(&f0, &data, &PathSpec::straight(z(0., 0.), z0), 1e-3).unwrap();
    let a = Complex64::from_polar(1.0, PI / 3.0);
    let g = holonomy_affine_deck(&data, &f1, a, z(0., 0.), z0, 1e-3, 1e-6).unwrap();
    let m = g.matrix();
    assert!((m - Matrix3::identity()).norm() > 0.5);
    (m * m * m * m * m * m - Matrix3::identity()).norm()
}

#[test]
fn rotation_holonomy_has_order_six_in_the_limit() {
    let (coarse, fine) = (rotation_defect(0.1, 48), rotation_defect(0.05, 96));
    assert!(fine < 2e-3 && coarse / fine > 3.0, "{coarse:e} {fine:e}");
}
