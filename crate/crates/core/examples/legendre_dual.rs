//! The Legendre transform of the disk solution, and projective duality of a
//! square.

use asl::monge_ampere::{legendre_transform, solve_dirichlet};
use asl::projective::{dual_domain, hausdorff_distance, Chart, ConvexDomainApprox};

fn main() -> asl::Result<()> {
    let disk = ConvexDomainApprox::disk([0.0, 0.0], 1.0, 1024)?;
    let lt = legendre_transform(&solve_dirichlet(&disk, 1.0 / 64.0, 1e-9, 50)?)?;
    for y in [[0.0, 0.0], [1.0, 0.0], [1.0, 1.0]] {
        if let Some(p) = lt.eval(y) {
            println!("u*({:?}) = {p:.5}, sqrt(1+|y|^2) = {:.5}", y, (1.0 + y[0] * y[0] + y[1] * y[1]).sqrt());
        }
    }

    let square = ConvexDomainApprox::polygon(Chart::standard(), &[[-1., -1.], [1., -1.], [1., 1.], [-1., 1.]], 8)?;
    let dual = dual_domain(&square)?;
    println!("dual of the square has {} samples; chart polygon:", dual.len());
    for p in dual.polygon_in_chart().iter().step_by(8) {
        println!("  ({:+.3}, {:+.3})", p[0], p[1]);
    }
    let back = dual_domain(&dual)?;
    println!("d_H(square**, square) = {:.2e}", hausdorff_distance(&back, &square)?.value);
    Ok(())
}
