//! Wang's equation on hyperbolic collars of shrinking length: the Blaschke
//! metric settles to its limit on the cusp.

use asl::wang::{make_background, solve_wang_1d, BackgroundKind, BackgroundParams, BoundarySpec};
use num_complex::Complex64;

fn main() -> asl::Result<()> {
    let r = Complex64::new(0.3, 0.0);
    let c = (-1f64).exp();
    println!("{:>8} {:>10} {:>12} {:>12}", "t", "B", "psi(-1)", "psi(-3)");
    for t in [1e-3, 1e-4, 1e-5, 1e-6] {
        let bg = make_background(BackgroundKind::Collar { t, c }, BackgroundParams::default())?;
        let sol = solve_wang_1d(&bg, r, BoundarySpec::Model, 1e-9)?;
        // log-density relative to the cusp metric |dx|/|x|
        let psi = |x: f64| sol.blaschke_log_density_at(x).unwrap() + 2.0 * x.abs().ln();
        println!("{t:>8.0e} {:>10} {:>12.8} {:>12.8}", sol.super_b.unwrap(), psi(-1.0), psi(-3.0));
    }
    Ok(())
}
