//! Solve the Monge-Ampère problem on a disk and an equilateral triangle and
//! compare the Pick-form norms of the two affine spheres.

use asl::monge_ampere::{blaschke_field, solve_dirichlet};
use asl::projective::{Chart, ConvexDomainApprox};

fn main() -> asl::Result<()> {
    let disk = ConvexDomainApprox::disk([0.0, 0.0], 1.0, 1024)?;
    let s = solve_dirichlet(&disk, 1.0 / 64.0, 1e-9, 50)?;
    println!("disk: v(0) = {:.6}, {} Newton steps", s.value_at([0.0, 0.0]).unwrap(), s.iterations());
    println!("      median |C|^2 = {:.2e}", blaschke_field(&s)?.median_pick_norm_sq());

    let h = 3f64.sqrt() / 2.0;
    let tri = ConvexDomainApprox::polygon(Chart::standard(), &[[-1.0, -h / 1.5], [1.0, -h / 1.5], [0.0, 2.0 * h - h / 1.5]], 16)?;
    let t = solve_dirichlet(&tri, 1.0 / 96.0, 1e-9, 50)?;
    let (x, v) = t.minimum();
    println!("triangle: min v = {v:.6} at ({:.3}, {:.3})", x[0], x[1]);
    println!("          median |C|^2 = {:.4} (Ţiţeica value 1/2)", blaschke_field(&t)?.median_pick_norm_sq());
    Ok(())
}
