//! Develop the affine sphere of U = z: the image is close to a
//! quadrilateral. Writes develop.svg to the temp directory.

use asl::developing::{develop_domain, develop_rays, extreme_clusters, initial_frame, InterpolatedWang};
use asl::projective::domains_svg;
use asl::wang::solve_wang_2d;
use num_complex::Complex64;

fn main() -> asl::Result<()> {
    let sol = solve_wang_2d(&[Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)], 8.0, 0.05, 1e-9)?;
    let data = InterpolatedWang::new(&sol);
    let f0 = initial_frame(sol.center_value())?;
    for len in [2.0, 4.0, 6.0] {
        let pts = develop_rays(&data, &f0, 256, len, 5e-3)?;
        println!("ray length {len}: clusters {:?}", extreme_clusters(&pts, 0.1, 3));
    }
    let dom = develop_domain(&data, &f0, 256, 6.0, 5e-3)?;
    let path = std::env::temp_dir().join("develop.svg");
    std::fs::write(&path, domains_svg(&[&dom], None, false)).map_err(asl::Error::from)?;
    println!("wrote {}", path.display());
    Ok(())
}
