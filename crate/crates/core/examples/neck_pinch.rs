//! The bulge flow M_s as s → 0 applied to the inscribed ellipse of the
//! principal triangle T and to the cap y² ≤ 4xz, which contains a whole edge of T.

use asl::projective::{bulge_flow, hausdorff_distance, principal_cap, principal_inellipse, principal_triangle};

fn main() -> asl::Result<()> {
    let tri = principal_triangle();
    let ellipse = principal_inellipse(512);
    let cap = principal_cap(256);
    println!("{:>8} {:>10} {:>10}", "s", "ellipse", "cap");
    for k in 1..=6 {
        let m = bulge_flow(10f64.powi(-k))?;
        let de = hausdorff_distance(&ellipse.apply(&m)?, &tri)?.value;
        let dc = hausdorff_distance(&cap.apply(&m)?, &tri)?.value;
        println!("{:>8.0e} {de:>10.5} {dc:>10.2e}", 10f64.powi(-k));
    }
    Ok(())
}
