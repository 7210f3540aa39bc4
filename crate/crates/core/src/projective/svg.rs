use super::domain::{principal_triangle, Chart, ConvexDomainApprox};

/// Renders domains dehomogenized in a chart (the first domain's chart when
/// `chart` is None); with `triangle_overlay` the principal triangle is drawn
/// dashed underneath.
pub fn domains_svg(domains: &[&ConvexDomainApprox], chart: Option<Chart>, triangle_overlay: bool) -> String {
    let chart = chart.unwrap_or_else(|| domains.first().map(|d| d.chart()).unwrap_or_else(Chart::standard));
    let tri = principal_triangle();
    let mut polys: Vec<(Vec<[f64; 2]>, &str, bool)> = Vec::new();
    if triangle_overlay {
        if let Some(p) = tri.polygon_in(&chart) {
            polys.push((p, "#888", true));
        }
    }
    let colors = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"];
    for (k, d) in domains.iter().enumerate() {
        if let Some(p) = d.polygon_in(&chart) {
            polys.push((p, colors[k % colors.len()], false));
        }
    }
    let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
    for (p, _, _) in &polys {
        for q in p {
            for k in 0..2 {
                lo[k] = lo[k].min(q[k]);
                hi[k] = hi[k].max(q[k]);
            }
        }
    }
    if !lo[0].is_finite() {
        lo = [-1.0, -1.0];
        hi = [1.0, 1.0];
    }
    let size = 512.0;
    let span = (hi[0] - lo[0]).max(hi[1] - lo[1]).max(1e-12);
    let pad = 0.05 * span;
    let s = size / (span + 2.0 * pad);
    let map = |q: &[f64; 2]| ((q[0] - lo[0] + pad) * s, size - (q[1] - lo[1] + pad) * s);
    let mut out = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{size}\" height=\"{size}\" viewBox=\"0 0 {size} {size}\">\n"
    );
    for (p, color, dashed) in &polys {
        let pts: Vec<String> = p
            .iter()
            .map(|q| {
                let (x, y) = map(q);
                format!("{x:.3},{y:.3}")
            })
            .collect();
        let dash = if *dashed { " stroke-dasharray=\"6 4\"" } else { "" };
        out.push_str(&format!(
            "  <polygon points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\"{dash}/>\n",
            pts.join(" ")
        ));
    }
    out.push_str("</svg>\n");
    out
}
