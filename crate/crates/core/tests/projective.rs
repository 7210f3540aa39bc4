use std::f64::consts::PI;

use asl::projective::{
    bulge_flow, classify_holonomy, dual_domain, fubini_study_distance, hausdorff_distance, principal_triangle,
    twist_bulge_matrix, Chart, ConvexDomainApprox, HolonomyKind, ProjectivePoint, ProjectiveTransform,
};
use nalgebra::Matrix3;
use proptest::prelude::*;

fn point() -> impl Strategy<Value = ProjectivePoint> {
    (-1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64)
        .prop_filter("nonzero", |(x, y, z)| x * x + y * y + z * z > 1e-4)
        .prop_map(|(x, y, z)| ProjectivePoint::new(x, y, z).unwrap())
}

fn transform() -> impl Strategy<Value = ProjectiveTransform> {
    prop::array::uniform9(-2.0..2.0f64).prop_filter_map("well conditioned", |a| {
        let m = Matrix3::from_row_slice(&a) + Matrix3::identity() * 3.0;
        ProjectiveTransform::from_projective(m).ok().filter(|t| t.matrix().norm() < 20.0)
    })
}

/// Vertices of a polygon inscribed in a random ellipse.
fn polygon() -> impl Strategy<Value = Vec<[f64; 2]>> {
    (0.3..2.0f64, 0.3..2.0f64, 0.0..PI, -0.5..0.5f64, -0.5..0.5f64, prop::collection::vec(0.0..1.0f64, 3..9)).prop_map(
        |(a, b, rot, cx, cy, gaps)| {
            let total: f64 = gaps.iter().map(|g| g + 0.3).sum();
            let mut t = 0.0;
            gaps.iter()
                .map(|g| {
                    t += 2.0 * PI * (g + 0.3) / total;
                    let (x, y) = (a * t.cos(), b * t.sin());
                    [cx + x * rot.cos() - y * rot.sin(), cy + x * rot.sin() + y * rot.cos()]
                })
                .collect()
        },
    )
}

proptest! {
    #[test]
    fn fubini_study_is_a_metric(p in point(), q in point(), r in point()) {
        let d = fubini_study_distance;
        prop_assert!(d(&p, &p) < 1e-7);
        prop_assert!((d(&p, &q) - d(&q, &p)).abs() < 1e-15);
        prop_assert!((d(&p, &q) - d(&p.negated(), &q)).abs() < 1e-15);
        prop_assert!(d(&p, &q) <= PI / 2.0 + 1e-15);
        prop_assert!(d(&p, &r) <= d(&p, &q) + d(&q, &r) + 1e-12);
    }

    #[test]
    fn classification_is_conjugation_invariant(a in 0.2..3.0f64, b in 0.2..3.0f64, g in transform()) {
        prop_assume!((a - b).abs() > 0.05 && (a * b - 1.0).abs() > 0.05 && (a * a * b - 1.0).abs() > 0.05);
        let m = ProjectiveTransform::diag(a, b, 1.0 / (a * b)).unwrap();
        let c0 = classify_holonomy(&m, 1e-6).unwrap();
        let c1 = classify_holonomy(&m.conjugate_by(&g), 1e-6).unwrap();
        prop_assert_eq!(c0.kind, HolonomyKind::Hyperbolic);
        prop_assert_eq!(c1.kind, c0.kind);
        for k in 0..3 {
            prop_assert!((c0.eigenvalues[k] - c1.eigenvalues[k]).abs() <= 1e-8 * c0.eigenvalues[2]);
        }
    }

    #[test]
    fn bulge_flow_is_a_one_parameter_group(s in 1e-3..1e3f64, t in 1e-3..1e3f64) {
        let lhs = bulge_flow(s).unwrap() * bulge_flow(t).unwrap();
        let rhs = bulge_flow(s * t).unwrap();
        prop_assert!((lhs.matrix() - rhs.matrix()).norm() <= 1e-12 * rhs.matrix().norm());
    }

    #[test]
    fn twist_bulge_parameters_add(a in -3.0..3.0f64, b in -3.0..3.0f64, c in -3.0..3.0f64, d in -3.0..3.0f64) {
        let lhs = twist_bulge_matrix(a, b).unwrap() * twist_bulge_matrix(c, d).unwrap();
        let rhs = twist_bulge_matrix(a + c, b + d).unwrap();
        prop_assert!((lhs.matrix() - rhs.matrix()).norm() <= 1e-12 * rhs.matrix().norm());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn dual_is_an_involution(v in polygon()) {
        let p = ConvexDomainApprox::polygon(Chart::standard(), &v, 4).unwrap();
        let twice = dual_domain(&dual_domain(&p).unwrap()).unwrap();
        prop_assert!(hausdorff_distance(&twice, &p).unwrap().value <= 1e-6);
    }

    #[test]
    fn projective_maps_commute_with_duality(v in polygon(), g in transform()) {
        // (gΩ)* = g^{-T} Ω*
        let p = ConvexDomainApprox::polygon(Chart::standard(), &v, 4).unwrap();
        let Ok(gp) = p.apply(&g) else { return Ok(()) };
        let git = ProjectiveTransform::new(g.matrix().try_inverse().unwrap().transpose()).unwrap();
        let lhs = dual_domain(&gp).unwrap();
        let rhs = dual_domain(&p).unwrap().apply(&git).unwrap();
        prop_assert!(hausdorff_distance(&lhs, &rhs).unwrap().value <= 1e-6);
    }
}

#[test]
fn hausdorff_to_triangle_is_invariant_under_its_stabilizer() {
    let t = principal_triangle();
    let e = ConvexDomainApprox::disk([0.0, 0.0], 0.3, 256).unwrap().with_chart(t.chart()).unwrap();
    let d0 = hausdorff_distance(&e, &t).unwrap().value;
    // the cyclic permutation of coordinates preserves T and the FS metric
    let p = ProjectiveTransform::new(Matrix3::new(0., 0., 1., 1., 0., 0., 0., 1., 0.)).unwrap();
    let d1 = hausdorff_distance(&e.apply(&p).unwrap(), &t).unwrap().value;
    assert!((d0 - d1).abs() < 5e-3, "{d0} {d1}");
}
