//! Wang's equation for U = z^3 − 1 on a disk of radius 4: away from the
//! zeros the solution approaches the flat metric |U|^{2/3}.

use asl::wang::{eval_poly, solve_wang_2d};
use num_complex::Complex64;

fn main() -> asl::Result<()> {
    let coeffs = [Complex64::new(-1.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)];
    let sol = solve_wang_2d(&coeffs, 4.0, 0.05, 1e-9)?;
    println!("{} rings x {} angles, {} Newton steps, residual {:.1e}", sol.n_rings, sol.n_theta, sol.iterations, sol.residual);
    println!("{:>6} {:>12} {:>12}", "r", "u", "flat");
    for i in (0..=sol.n_rings).step_by(10) {
        let z = Complex64::new(i as f64 * sol.dr, 0.0);
        let u = if i == 0 { sol.center_value() } else { sol.ring_value(i, 0) };
        let flat = (2.0 * eval_poly(&coeffs, z).norm_sqr()).ln() / 3.0;
        println!("{:>6.2} {u:>12.6} {flat:>12.6}", z.re);
    }
    Ok(())
}
