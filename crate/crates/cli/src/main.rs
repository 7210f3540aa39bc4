use std::path::{Path, PathBuf};
use std::process::ExitCode;

use asl::developing::{
    develop_rays, extreme_clusters, holonomy_cylinder_report, initial_frame, titeica_frame, ConstantData,
    InterpolatedWang,
};
use asl::experiments::{run_experiment, ExperimentParams};
use asl::monge_ampere::{blaschke_field, solution_csv, solution_json, solve_dirichlet};
use asl::projective::{
    bulge_flow, domains_svg, dual_domain, hausdorff_distance, principal_cap, principal_inellipse,
    principal_triangle, Chart, ConvexDomainApprox,
};
use asl::residue::classify_end;
use asl::wang::{make_background, solve_wang_1d, solve_wang_2d_with, BackgroundKind, BackgroundParams, BoundarySpec};
use asl::{Error, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "asl", version, about = "Affine spheres, Wang's equation and convex RP² holonomy")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Global {
    /// Directory for JSON/CSV/SVG outputs
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Solver tolerance
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// ODE step
    #[arg(long, global = true)]
    step: Option<f64>,
    /// Grid spacing
    #[arg(long, visible_alias = "h", global = true)]
    grid: Option<f64>,
    /// Print the JSON result on stdout instead of a summary
    #[arg(long, global = true)]
    json: bool,
    /// Also write an SVG when the command produces a domain
    #[arg(long, global = true)]
    svg: bool,
    /// Worker threads for sweeps (ASL_THREADS takes precedence)
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
}

#[derive(Subcommand)]
enum Cmd {
    /// Solve the Monge-Ampère Dirichlet problem on a convex domain
    MaSolve {
        #[command(flatten)]
        domain: DomainArg,
    },
    /// Solve Wang's equation on a cylinder, cusp or collar
    #[command(name = "wang-1d")]
    Wang1d {
        #[arg(long, value_enum, default_value_t = Background::Flat)]
        background: Background,
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        re: f64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        im: f64,
        #[arg(long, default_value_t = 1e-3)]
        t: f64,
        #[arg(long, default_value_t = (-1f64).exp())]
        c: f64,
        #[arg(long, default_value_t = 1.0)]
        density: f64,
        #[arg(long, allow_negative_numbers = true)]
        x_min: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        x_max: Option<f64>,
        /// Dirichlet values "left,right" instead of the model boundary data
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        dirichlet: Option<Vec<f64>>,
    },
    /// Solve Wang's equation for a polynomial cubic differential on a disk
    #[command(name = "wang-2d")]
    Wang2d {
        #[command(flatten)]
        poly: PolyArg,
    },
    /// Develop an affine sphere along radial rays
    Develop {
        #[arg(long, value_enum, default_value_t = Source::Polynomial)]
        source: Source,
        #[command(flatten)]
        poly: PolyArg,
        #[arg(long, default_value_t = 256)]
        rays: usize,
        #[arg(long, default_value_t = 6.0)]
        length: f64,
        /// Clustering threshold in radians
        #[arg(long, default_value_t = 0.1)]
        threshold: f64,
    },
    /// Holonomy of the flat cylinder with residue R
    Holonomy {
        #[arg(long, allow_negative_numbers = true)]
        re: f64,
        #[arg(long, allow_negative_numbers = true)]
        im: f64,
    },
    /// Holonomy type of an end from its residue
    ClassifyResidue {
        #[arg(long, allow_negative_numbers = true)]
        re: f64,
        #[arg(long, allow_negative_numbers = true)]
        im: f64,
    },
    /// Projective dual of a domain
    Dual {
        #[command(flatten)]
        domain: DomainArg,
    },
    /// Fubini-Study Hausdorff distance between two domains
    Hausdorff {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// Apply the bulge flow M_s to a domain and measure its distance to T
    NeckPinch {
        #[arg(long, default_value = "inellipse")]
        domain: String,
        #[arg(long, value_delimiter = ',', default_value = "1e-1,1e-2,1e-3,1e-4")]
        s: Vec<f64>,
    },
    /// Run a named parameter sweep
    Experiment {
        name: String,
        /// Sweep values (s, t, n, ray length or radius, by experiment)
        #[arg(long, visible_alias = "s", value_delimiter = ',')]
        sweep: Option<Vec<f64>>,
    },
}

#[derive(Args)]
struct DomainArg {
    /// disk, square, triangle, inellipse, cap, polygon:N, or a JSON file
    #[arg(long, default_value = "disk")]
    domain: String,
    /// Scale for disk, square and polygon:N
    #[arg(long, default_value_t = 1.0)]
    radius: f64,
}

#[derive(Args)]
struct PolyArg {
    /// Coefficients of U, constant term first, as re:im pairs
    #[arg(long, value_delimiter = ',', default_value = "0:0,1:0")]
    coeffs: Vec<String>,
    #[arg(long, default_value_t = 8.0)]
    radius: f64,
    #[arg(long, default_value_t = asl::wang::DEFAULT_N_THETA)]
    n_theta: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum Background {
    Flat,
    Cusp,
    Collar,
    GraftedFlat,
}

#[derive(Clone, Copy, ValueEnum)]
enum Source {
    Titeica,
    Polynomial,
}

fn parse_domain(spec: &str, radius: f64) -> Result<ConvexDomainApprox> {
    let r = radius;
    match spec {
        "disk" => ConvexDomainApprox::disk([0.0, 0.0], r, 1024),
        "square" => ConvexDomainApprox::polygon(Chart::standard(), &[[-r, -r], [r, -r], [r, r], [-r, r]], 16),
        "triangle" => Ok(principal_triangle()),
        "inellipse" => Ok(principal_inellipse(512)),
        "cap" => Ok(principal_cap(256)),
        _ => {
            if let Some(n) = spec.strip_prefix("polygon:") {
                let n: usize = n.parse().map_err(|_| Error::Invalid(format!("bad polygon spec {spec:?}")))?;
                return ConvexDomainApprox::regular_polygon(n, r, 4);
            }
            let path = Path::new(spec);
            if !path.exists() {
                return Err(Error::Invalid(format!("unknown domain {spec:?}")));
            }
            let d: ConvexDomainApprox = serde_json::from_str(&std::fs::read_to_string(path)?)?;
            ConvexDomainApprox::from_boundary(d.boundary().to_vec(), Some(d.chart()))
        }
    }
}

fn parse_coeffs(items: &[String]) -> Result<Vec<Complex64>> {
    items
        .iter()
        .map(|s| {
            let (a, b) = s.split_once(':').unwrap_or((s, "0"));
            match (a.trim().parse::<f64>(), b.trim().parse::<f64>()) {
                (Ok(a), Ok(b)) => Ok(Complex64::new(a, b)),
                _ => Err(Error::Invalid(format!("bad coefficient {s:?}"))),
            }
        })
        .collect()
}

struct Output<'a> {
    g: &'a Global,
    name: &'static str,
}

impl Output<'_> {
    fn write(&self, ext: &str, contents: &str) -> Result<Option<String>> {
        let Some(dir) = &self.g.out else { return Ok(None) };
        std::fs::create_dir_all(dir)?;
        let p = dir.join(format!("{}.{ext}", self.name));
        std::fs::write(&p, contents)?;
        Ok(Some(p.display().to_string()))
    }

    fn svg(&self, domains: &[&ConvexDomainApprox], triangle: bool) -> Result<Option<String>> {
        if !self.g.svg {
            return Ok(None);
        }
        self.write("svg", &domains_svg(domains, None, triangle))
    }

    /// Writes `full` to the out dir and prints either `summary` as JSON or
    /// its fields one per line.
    fn finish(&self, mut summary: Value, full: Option<Value>, mut artifacts: Vec<String>) -> Result<()> {
        if let Some(f) = full {
            artifacts.extend(self.write("json", &serde_json::to_string_pretty(&f)?)?);
        }
        if !artifacts.is_empty() {
            summary["artifacts"] = json!(artifacts);
        }
        if self.g.json {
            println!("{}", serde_json::to_string_pretty(&summary)?);
        } else if let Value::Object(m) = &summary {
            for (k, v) in m {
                println!("{k}: {v}");
            }
        }
        Ok(())
    }
}

fn run(cli: Cli) -> Result<()> {
    let g = &cli.global;
    let tol = g.tol.unwrap_or(1e-9);
    match cli.cmd {
        Cmd::MaSolve { domain } => {
            let out = Output { g, name: "ma-solve" };
            let d = parse_domain(&domain.domain, domain.radius)?;
            let sol = solve_dirichlet(&d, g.grid.unwrap_or(1.0 / 64.0), tol, 50)?;
            let field = blaschke_field(&sol).ok();
            let mut arts = Vec::new();
            arts.extend(out.write("csv", &solution_csv(&sol, field.as_ref()))?);
            arts.extend(out.svg(&[&d], false)?);
            let (xm, vm) = sol.minimum();
            let summary = json!({
                "schema": 1,
                "command": "ma-solve",
                "domain": domain.domain,
                "h": sol.grid().h(),
                "nodes": sol.grid().len(),
                "iterations": sol.iterations(),
                "residual": sol.residual(),
                "v0": sol.value_at([0.0, 0.0]),
                "min": {"x": xm, "v": vm},
                "median_pick_norm_sq": field.as_ref().map(|f| f.median_pick_norm_sq()),
            });
            out.finish(summary, Some(solution_json(&sol, field.as_ref())), arts)
        }
        Cmd::Wang1d { background, re, im, t, c, density, x_min, x_max, dirichlet } => {
            let out = Output { g, name: "wang-1d" };
            let kind = match background {
                Background::Flat => BackgroundKind::Flat { density },
                Background::Cusp => BackgroundKind::Cusp { c },
                Background::Collar => BackgroundKind::Collar { t, c },
                Background::GraftedFlat => BackgroundKind::GraftedFlat { t, c },
            };
            let x_range = match (x_min, x_max) {
                (Some(a), Some(b)) => Some([a, b]),
                (None, None) => None,
                _ => return Err(Error::Invalid("give both --x-min and --x-max".into())),
            };
            let params = BackgroundParams { x_range, step: g.grid.unwrap_or(1e-3) };
            let bc = match dirichlet {
                None => BoundarySpec::Model,
                Some(v) if v.len() == 2 => BoundarySpec::Dirichlet { left: v[0], right: v[1] },
                Some(_) => return Err(Error::Invalid("--dirichlet takes two values".into())),
            };
            let bg = make_background(kind, params)?;
            let sol = solve_wang_1d(&bg, Complex64::new(re, im), bc, tol)?;
            let arts: Vec<String> = out.write("csv", &sol.to_csv())?.into_iter().collect();
            let n = sol.u.len();
            let summary = json!({
                "schema": 1,
                "command": "wang-1d",
                "background": kind,
                "residue": [re, im],
                "x_range": sol.bg.x_range,
                "points": n,
                "iterations": sol.iterations,
                "residual": sol.residual,
                "u_mid": sol.u[n / 2],
                "min_u": sol.u.iter().cloned().fold(f64::INFINITY, f64::min),
                "max_u": sol.u.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
                "super_b": sol.super_b,
            });
            out.finish(summary, Some(serde_json::to_value(&sol)?), arts)
        }
        Cmd::Wang2d { poly } => {
            let out = Output { g, name: "wang-2d" };
            let coeffs = parse_coeffs(&poly.coeffs)?;
            let sol = solve_wang_2d_with(&coeffs, poly.radius, g.grid.unwrap_or(0.05), tol, poly.n_theta)?;
            let summary = json!({
                "schema": 1,
                "command": "wang-2d",
                "coefficients": sol.coeffs,
                "radius": sol.radius,
                "rings": sol.n_rings,
                "n_theta": sol.n_theta,
                "iterations": sol.iterations,
                "residual": sol.residual,
                "u0": sol.center_value(),
                "max_angular_variation": sol.max_angular_variation(),
            });
            out.finish(summary, Some(serde_json::to_value(&sol)?), Vec::new())
        }
        Cmd::Develop { source, poly, rays, length, threshold } => {
            let out = Output { g, name: "develop" };
            let step = g.step.unwrap_or(5e-3);
            let pts = match source {
                Source::Titeica => develop_rays(&ConstantData::titeica(), &titeica_frame(), rays, length, step)?,
                Source::Polynomial => {
                    let coeffs = parse_coeffs(&poly.coeffs)?;
                    if !(length < poly.radius) {
                        return Err(Error::Invalid(format!("ray length must be below the radius {}", poly.radius)));
                    }
                    let sol = solve_wang_2d_with(&coeffs, poly.radius, g.grid.unwrap_or(0.05), tol, poly.n_theta)?;
                    let data = InterpolatedWang::new(&sol);
                    develop_rays(&data, &initial_frame(sol.center_value())?, rays, length, step)?
                }
            };
            let clusters = extreme_clusters(&pts, threshold, 3);
            let hull = ConvexDomainApprox::from_boundary(pts.clone(), None);
            let mut arts = Vec::new();
            if let Ok(h) = &hull {
                arts.extend(out.svg(&[h], true)?);
            }
            let summary = json!({
                "schema": 1,
                "command": "develop",
                "rays": rays,
                "length": length,
                "step": step,
                "clusters": clusters,
                "cluster_count": clusters.len(),
                "convex": hull.is_ok(),
            });
            let full = json!({"schema": 1, "points": pts, "clusters": clusters});
            out.finish(summary, Some(full), arts)
        }
        Cmd::Holonomy { re, im } => {
            let out = Output { g, name: "holonomy" };
            let r = Complex64::new(re, im);
            let h = holonomy_cylinder_report(r, g.step.unwrap_or(asl::developing::DEFAULT_STEP))?;
            let summary = json!({
                "schema": 1,
                "command": "holonomy",
                "residue": [re, im],
                "matrix": h.matrix,
                "class": h.class,
                "closed_form_deviation": h.closed_form_deviation,
                "imaginary_part": h.imaginary_part,
                "predicted": classify_end(r),
            });
            out.finish(summary.clone(), Some(summary), Vec::new())
        }
        Cmd::ClassifyResidue { re, im } => {
            let out = Output { g, name: "classify-residue" };
            let mut v = serde_json::to_value(classify_end(Complex64::new(re, im)))?;
            v["schema"] = json!(1);
            out.finish(v.clone(), Some(v), Vec::new())
        }
        Cmd::Dual { domain } => {
            let out = Output { g, name: "dual" };
            let d = parse_domain(&domain.domain, domain.radius)?;
            let dual = dual_domain(&d)?;
            let twice = dual_domain(&dual)?;
            let arts: Vec<String> = out.svg(&[&d, &dual], false)?.into_iter().collect();
            let summary = json!({
                "schema": 1,
                "command": "dual",
                "samples": dual.len(),
                "involution_error": hausdorff_distance(&twice, &d)?.value,
            });
            out.finish(summary, Some(serde_json::to_value(&dual)?), arts)
        }
        Cmd::Hausdorff { a, b } => {
            let out = Output { g, name: "hausdorff" };
            let (da, db) = (parse_domain(&a, 1.0)?, parse_domain(&b, 1.0)?);
            let d = hausdorff_distance(&da, &db)?;
            let arts: Vec<String> = out.svg(&[&da, &db], false)?.into_iter().collect();
            let v = json!({"schema": 1, "command": "hausdorff", "value": d.value, "error_bound": d.error_bound});
            out.finish(v.clone(), Some(v), arts)
        }
        Cmd::NeckPinch { domain, s } => {
            let out = Output { g, name: "neck-pinch" };
            let d = parse_domain(&domain, 1.0)?;
            let tri = principal_triangle();
            let mut images = Vec::new();
            let mut dist = Vec::new();
            for &si in &s {
                let img = d.apply(&bulge_flow(si)?)?;
                dist.push(hausdorff_distance(&img, &tri)?.value);
                images.push(img);
            }
            let refs: Vec<&ConvexDomainApprox> = images.iter().collect();
            let arts: Vec<String> = out.svg(&refs, true)?.into_iter().collect();
            let v = json!({"schema": 1, "command": "neck-pinch", "domain": domain, "s": s, "hausdorff": dist});
            out.finish(v.clone(), Some(v), arts)
        }
        Cmd::Experiment { name, sweep } => {
            let out = Output { g, name: "experiment" };
            let threads = std::env::var("ASL_THREADS").ok().and_then(|v| v.parse().ok()).unwrap_or(g.threads);
            let p = ExperimentParams { sweep, h: g.grid, tol: g.tol, step: g.step, threads };
            let mut rep = run_experiment(&name, &p)?;
            let out = Output { name: file_stem(&name), ..out };
            rep.artifacts.extend(out.write("json", &rep.to_json())?);
            if g.json {
                println!("{}", rep.to_json());
            } else {
                for c in &rep.checks {
                    println!("{} {} {:.6e} {} {:e}", if c.pass { "PASS" } else { "FAIL" }, c.name, c.value, c.relation, c.tolerance);
                }
                println!("{}: {}", rep.experiment, if rep.pass { "pass" } else { "fail" });
            }
            Ok(())
        }
    }
}

/// Experiment names come from a fixed list, so the file stem can be static.
fn file_stem(name: &str) -> &'static str {
    asl::experiments::EXPERIMENTS.iter().find(|&&n| n == name).copied().unwrap_or("experiment")
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_validation() { 2 } else { 3 })
        }
    }
}
