//! Holonomy of flat cylinder ends: integrate the frame around the loop and
//! compare with the prediction from the residue.

use asl::developing::holonomy_cylinder_report;
use asl::residue::classify_end;
use num_complex::Complex64;

fn main() -> asl::Result<()> {
    for r in [Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0), Complex64::new(0.5, 0.5), Complex64::new(-0.5, 0.5)] {
        let h = holonomy_cylinder_report(r, 1e-3)?;
        let end = classify_end(r);
        let class = h.class.expect("real positive spectrum");
        println!("R = {r}");
        println!("  predicted {} {:.6?}", end.kind, end.alphas);
        println!("  integrated {} {:.6?}", class.kind, class.eigenvalues);
        println!("  geometric multiplicity {}, bulge sign {}", class.geometric_multiplicity, end.bulge_sign);
    }
    Ok(())
}
