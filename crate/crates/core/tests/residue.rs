use std::f64::consts::PI;

use asl::developing::holonomy_cylinder_report;
use asl::projective::HolonomyKind;
use asl::residue::{classify_end, cubic_coefficients, eigenvalue_exponents};
use num_complex::Complex64;
use proptest::prelude::*;

fn residue() -> impl Strategy<Value = Complex64> {
    (-3.0..3.0f64, -3.0..3.0f64).prop_filter("nonzero", |(a, b)| a.hypot(*b) > 1e-3).prop_map(|(a, b)| Complex64::new(a, b))
}

proptest! {
    #[test]
    fn negating_the_residue_inverts_the_spectrum(r in residue()) {
        let mut a = classify_end(r).alphas;
        let mut b = classify_end(-r).alphas.map(|x| 1.0 / x);
        a.sort_by(|x, y| x.partial_cmp(y).unwrap());
        b.sort_by(|x, y| x.partial_cmp(y).unwrap());
        for k in 0..3 {
            prop_assert!((a[k] - b[k]).abs() <= 1e-8 * a[k]);
        }
    }

    #[test]
    fn discriminant_is_the_real_part(r in residue()) {
        // Π(λi − λj)² = −4p³ − 27q² = 27 (Re R)²
        let l = eigenvalue_exponents(r);
        let disc = ((l[0] - l[1]) * (l[0] - l[2]) * (l[1] - l[2])).powi(2);
        let (p, q) = cubic_coefficients(r);
        let want = 27.0 * r.re * r.re;
        prop_assert!((disc - want).abs() <= 1e-9 * (1.0 + r.norm_sqr()));
        prop_assert!((-4.0 * p.powi(3) - 27.0 * q * q - want).abs() <= 1e-9 * (1.0 + r.norm_sqr()));
        prop_assert!((l[0] + l[1] + l[2]).abs() < 1e-12);
    }

    #[test]
    fn kind_and_bulge_sign_follow_re(r in residue()) {
        let e = classify_end(r);
        prop_assert_eq!(e.kind, HolonomyKind::Hyperbolic);
        prop_assert_eq!(e.bulge_sign as f64, r.re.signum());
        let q = classify_end(Complex64::new(0.0, r.im));
        prop_assert_eq!(q.kind, if r.im == 0.0 { HolonomyKind::Parabolic } else { HolonomyKind::QuasiHyperbolic });
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn cylinder_holonomy_matches_the_dictionary(re in 0.1..1.5f64, sign in prop::bool::ANY, im in -1.5..1.5f64) {
        let r = Complex64::new(if sign { re } else { -re }, im);
        check(r)?;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10))]

    #[test]
    fn imaginary_residues_are_quasi_hyperbolic(im in 0.2..1.5f64, sign in prop::bool::ANY) {
        check(Complex64::new(0.0, if sign { im } else { -im }))?;
    }
}

fn check(r: Complex64) -> Result<(), TestCaseError> {
    let h = holonomy_cylinder_report(r, 1e-3).unwrap();
    let class = h.class.unwrap();
    let end = classify_end(r);
    prop_assert_eq!(class.kind, end.kind);
    for k in 0..3 {
        let want = (2.0 * PI * end.lambdas[k]).exp();
        prop_assert!((class.eigenvalues[k] - want).abs() <= 1e-5 * want, "{:?} vs {:?}", class.eigenvalues, end.alphas);
    }
    prop_assert!(h.closed_form_deviation.unwrap() <= 1e-7);
    Ok(())
}
