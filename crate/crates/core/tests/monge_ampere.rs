use asl::monge_ampere::{blaschke_field, legendre_transform, solve_dirichlet};
use asl::projective::{Chart, ConvexDomainApprox};

fn triangle(v: [[f64; 2]; 3]) -> ConvexDomainApprox {
    ConvexDomainApprox::polygon(Chart::standard(), &v, 16).unwrap()
}

#[test]
fn pick_norm_is_affine_invariant() {
    let a = triangle([[0., 0.], [1., 0.], [0., 1.]]);
    // image under x ↦ [[1.5, 0.4], [−0.2, 0.8]]x + (0.3, −0.1)
    let map = |p: [f64; 2]| [1.5 * p[0] + 0.4 * p[1] + 0.3, -0.2 * p[0] + 0.8 * p[1] - 0.1];
    let b = triangle([map([0., 0.]), map([1., 0.]), map([0., 1.])]);
    let ma = blaschke_field(&solve_dirichlet(&a, 1.0 / 96.0, 1e-9, 50).unwrap()).unwrap().median_pick_norm_sq();
    let mb = blaschke_field(&solve_dirichlet(&b, 1.0 / 96.0, 1e-9, 50).unwrap()).unwrap().median_pick_norm_sq();
    assert!((ma - 0.5).abs() < 0.05 && (mb - 0.5).abs() < 0.05, "{ma} {mb}");
    assert!((ma - mb).abs() < 0.03, "{ma} {mb}");
}

#[test]
fn linear_maps_scale_v_by_det_to_the_one_third() {
    // v_{AΩ}(Ax) = |det A|^{1/3} v_Ω(x); an ellipse with semi-axes 2 and 1/2 has det 1
    let e = ConvexDomainApprox::ellipse(Chart::standard(), [0.0, 0.0], 2.0, 0.5, 0.3, 1024).unwrap();
    let s = solve_dirichlet(&e, 1.0 / 64.0, 1e-9, 50).unwrap();
    let (c, s3) = (0.3f64.cos(), 0.3f64.sin());
    for (x, r2) in [([0.0, 0.0], 0.0), ([1.0, 0.0], 0.25), ([0.0, 0.25], 0.25)] {
        let p = [c * x[0] - s3 * x[1], s3 * x[0] + c * x[1]];
        let v = s.value_at(p).unwrap();
        assert!((v + (1.0f64 - r2).sqrt()).abs() < 5e-3, "{p:?} {v}");
    }
}

#[test]
fn legendre_of_the_disk_is_the_hyperboloid() {
    let d = ConvexDomainApprox::disk([0.0, 0.0], 1.0, 1024).unwrap();
    let lt = legendre_transform(&solve_dirichlet(&d, 1.0 / 64.0, 1e-9, 50).unwrap()).unwrap();
    let mut worst = 0f64;
    for i in 0..lt.n {
        for j in 0..lt.n {
            if let Some(p) = lt.get(i, j) {
                let y = lt.y(i, j);
                worst = worst.max((p - (1.0 + y[0] * y[0] + y[1] * y[1]).sqrt()).abs());
            }
        }
    }
    assert!(worst < 1e-2, "{worst}");
}
