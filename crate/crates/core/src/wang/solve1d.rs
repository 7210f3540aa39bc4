use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::background::BackgroundMetric1D;
use crate::error::{Error, Result};
use crate::linalg::{max_abs, solve_tridiagonal};

/// Slack allowed outside the sub/super-solution bracket.
pub const BRACKET_EPS: f64 = 1e-6;

/// u = (1/3)·log(2|R|²), the solution of the flat-cylinder equation
/// 4|R|²e^{−2u} = 2e^u.
pub fn constant_solution(r: Complex64) -> Result<f64> {
    let n2 = r.norm_sqr();
    if n2 == 0.0 || !n2.is_finite() {
        return Err(Error::ZeroResidue);
    }
    Ok((2.0 * n2).ln() / 3.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundarySpec {
    /// log of max(hyperbolic, flat Blaschke) density over the background.
    Model,
    Dirichlet { left: f64, right: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Wang1dOptions {
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for Wang1dOptions {
    fn default() -> Self {
        Wang1dOptions { tol: 1e-10, max_iter: 100 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WangSolution1D {
    pub bg: BackgroundMetric1D,
    /// [Re R, Im R]
    pub residue: [f64; 2],
    pub u: Vec<f64>,
    pub iterations: usize,
    pub residual: f64,
    /// Super-solution constant B, for hyperbolic-type backgrounds.
    pub super_b: Option<f64>,
}

impl WangSolution1D {
    pub fn residue(&self) -> Complex64 {
        Complex64::new(self.residue[0], self.residue[1])
    }

    /// Linear interpolation of u.
    pub fn value_at(&self, x: f64) -> Option<f64> {
        let (i, s) = self.bg.locate(x)?;
        Some((1.0 - s) * self.u[i] + s * self.u[i + 1])
    }

    /// log of the Blaschke density over |dℓ|²: u + 2 log ρ.
    pub fn blaschke_log_density(&self) -> Vec<f64> {
        self.u.iter().zip(&self.bg.rho).map(|(u, r)| u + 2.0 * r.ln()).collect()
    }

    pub fn blaschke_log_density_at(&self, x: f64) -> Option<f64> {
        let (i, s) = self.bg.locate(x)?;
        let p = self.blaschke_log_density();
        Some((1.0 - s) * p[i] + s * p[i + 1])
    }

    /// Conformal factor relative to the hyperbolic metric, log(h/g).
    pub fn relative_to_hyperbolic(&self) -> Option<Vec<f64>> {
        if !self.bg.is_hyperbolic_type() {
            return None;
        }
        Some(hyperbolic_shift(&self.bg).iter().zip(&self.u).map(|(s, u)| u + s).collect())
    }

    /// The super-solution φ_log + B relative to the hyperbolic metric.
    pub fn super_solution(&self) -> Option<Vec<f64>> {
        let b = self.super_b?;
        Some(self.bg.x.iter().map(|&x| self.bg.graft_potential(x) + b).collect())
    }

    /// Max of |F(u)| at interior nodes.
    pub fn pde_residual(&self) -> f64 {
        let (f, _) = system(&self.bg.rho, &self.bg.kappa, self.bg.step(), self.residue().norm_sqr(), &self.u);
        max_abs(&f)
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("x,rho,kappa,u\n");
        for i in 0..self.u.len() {
            s.push_str(&format!(
                "{:.10e},{:.10e},{:.10e},{:.10e}\n",
                self.bg.x[i], self.bg.rho[i], self.bg.kappa[i], self.u[i]
            ));
        }
        s
    }
}

/// 2 log(ρ_bg/ρ_g): adds to a factor over the background to get one over the
/// hyperbolic metric.
fn hyperbolic_shift(bg: &BackgroundMetric1D) -> Vec<f64> {
    bg.x
        .iter()
        .zip(&bg.rho)
        .map(|(&x, r)| 2.0 * (r / bg.hyperbolic_density(x).unwrap()).ln())
        .collect()
}

/// Interior residuals ρ⁻²u'' + 4|R|²ρ⁻⁶e^{−2u} − 2e^u − 2κ and the
/// tridiagonal Jacobian diagonal.
fn system(rho: &[f64], kappa: &[f64], h: f64, r2: f64, u: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let n = u.len();
    let mut f = vec![0.0; n];
    let mut d = vec![0.0; n];
    for i in 1..n - 1 {
        let w = 1.0 / (rho[i] * rho[i] * h * h);
        let q = 4.0 * r2 / rho[i].powi(6) * (-2.0 * u[i]).exp();
        let e = 2.0 * u[i].exp();
        f[i] = w * (u[i + 1] - 2.0 * u[i] + u[i - 1]) + q - e - 2.0 * kappa[i];
        d[i] = -2.0 * w - 2.0 * q - e;
    }
    (f, d)
}

fn model_values(bg: &BackgroundMetric1D, r: Complex64) -> Result<Vec<f64>> {
    let uc = if r.norm_sqr() > 0.0 { Some(constant_solution(r)?) } else { None };
    bg.x
        .iter()
        .zip(&bg.rho)
        .map(|(&x, rho)| {
            let flat = uc.map(|u| u - 2.0 * rho.ln());
            match (bg.hyperbolic_density(x), flat) {
                (Some(g), Some(f)) => Ok((2.0 * (g / rho).ln()).max(f)),
                (Some(g), None) => Ok(2.0 * (g / rho).ln()),
                (None, Some(f)) => Ok(f),
                (None, None) => Err(Error::ZeroResidue),
            }
        })
        .collect()
}

/// Size of the rounding error in evaluating the discrete residual; Newton
/// stops here when the requested tolerance is below it.
fn roundoff_floor(bg: &BackgroundMetric1D, u: &[f64]) -> f64 {
    let h = bg.step();
    let umax = max_abs(u).max(1.0);
    let wmax = bg.rho.iter().map(|r| 1.0 / (r * r * h * h)).fold(0.0, f64::max);
    64.0 * f64::EPSILON * 4.0 * wmax * umax
}

/// Discrete Wang operator relative to the hyperbolic metric of `bg`.
fn hyperbolic_operator(bg: &BackgroundMetric1D, r2: f64, u: &[f64]) -> Vec<f64> {
    let rho: Vec<f64> = bg.x.iter().map(|&x| bg.hyperbolic_density(x).unwrap()).collect();
    let kappa = vec![-1.0; rho.len()];
    system(&rho, &kappa, bg.step(), r2, u).0
}

/// Smallest power of two B with L(φ_log + B) ≤ 0 at every interior node.
fn super_constant(bg: &BackgroundMetric1D, r2: f64) -> Result<f64> {
    let phi: Vec<f64> = bg.x.iter().map(|&x| bg.graft_potential(x)).collect();
    for k in -20..=10 {
        let b = 2f64.powi(k);
        let s: Vec<f64> = phi.iter().map(|p| p + b).collect();
        let l = hyperbolic_operator(bg, r2, &s);
        if l[1..l.len() - 1].iter().all(|&v| v <= 0.0) {
            return Ok(b);
        }
    }
    Err(Error::BracketViolated("no super-solution constant up to 2^10".into()))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubSuperReport {
    /// min over interior nodes of L(0); must be ≥ −1e−8.
    pub min_sub: f64,
    /// max over interior nodes of L(φ_log + B); must be ≤ 1e−8.
    pub max_super: f64,
    pub b: f64,
    /// min of u (relative to the hyperbolic metric).
    pub min_u: f64,
    /// max of u − (φ_log + B).
    pub max_excess: f64,
    pub sub_ok: bool,
    pub super_ok: bool,
    pub bracketed: bool,
}

/// Signs of the Wang operator on the sub-solution 0 and the super-solution
/// φ_log + B, and the position of a candidate u (sampled on the bg grid and
/// expressed over the background metric) inside the bracket.
pub fn check_sub_super(bg: &BackgroundMetric1D, r: Complex64, u: &[f64]) -> Result<SubSuperReport> {
    if !bg.is_hyperbolic_type() {
        return Err(Error::Invalid("flat backgrounds have no hyperbolic sub-solution".into()));
    }
    if u.len() != bg.len() {
        return Err(Error::Invalid("candidate is not sampled on the background grid".into()));
    }
    let r2 = r.norm_sqr();
    let n = bg.len();
    let l0 = hyperbolic_operator(bg, r2, &vec![0.0; n]);
    let b = super_constant(bg, r2)?;
    let phi: Vec<f64> = bg.x.iter().map(|&x| bg.graft_potential(x)).collect();
    let s: Vec<f64> = phi.iter().map(|p| p + b).collect();
    let ls = hyperbolic_operator(bg, r2, &s);
    let shift = hyperbolic_shift(bg);
    let uh: Vec<f64> = u.iter().zip(&shift).map(|(u, s)| u + s).collect();
    let min_sub = l0[1..n - 1].iter().cloned().fold(f64::INFINITY, f64::min);
    let max_super = ls[1..n - 1].iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let min_u = uh.iter().cloned().fold(f64::INFINITY, f64::min);
    let max_excess = uh.iter().zip(&s).map(|(u, s)| u - s).fold(f64::NEG_INFINITY, f64::max);
    Ok(SubSuperReport {
        min_sub,
        max_super,
        b,
        min_u,
        max_excess,
        sub_ok: min_sub >= -1e-8,
        super_ok: max_super <= 1e-8,
        bracketed: min_u >= -BRACKET_EPS && max_excess <= BRACKET_EPS,
    })
}

pub fn solve_wang_1d(bg: &BackgroundMetric1D, r: Complex64, bc: BoundarySpec, tol: f64) -> Result<WangSolution1D> {
    solve_wang_1d_with(bg, r, bc, &Wang1dOptions { tol, ..Default::default() })
}

pub fn solve_wang_1d_with(
    bg: &BackgroundMetric1D,
    r: Complex64,
    bc: BoundarySpec,
    opts: &Wang1dOptions,
) -> Result<WangSolution1D> {
    if !(opts.tol > 0.0) {
        return Err(Error::Invalid("tol must be positive".into()));
    }
    if !(r.re.is_finite() && r.im.is_finite()) {
        return Err(Error::Invalid("residue must be finite".into()));
    }
    let n = bg.len();
    let h = bg.step();
    let r2 = r.norm_sqr();
    let mut u = model_values(bg, r)?;
    if let BoundarySpec::Dirichlet { left, right } = bc {
        if !(left.is_finite() && right.is_finite()) {
            return Err(Error::Invalid("boundary values must be finite".into()));
        }
        u[0] = left;
        u[n - 1] = right;
    }
    let (mut f, mut d) = system(&bg.rho, &bg.kappa, h, r2, &u);
    let mut res = max_abs(&f);
    let mut iterations = 0;
    let mut step;
    while res > opts.tol {
        if iterations >= opts.max_iter {
            return Err(Error::NewtonDiverged(format!("residual {res:.3e} after {iterations} iterations")));
        }
        iterations += 1;
        let m = n - 2;
        let mut a = vec![0.0; m];
        let mut c = vec![0.0; m];
        let mut rhs = vec![0.0; m];
        for k in 0..m {
            let i = k + 1;
            let w = 1.0 / (bg.rho[i] * bg.rho[i] * h * h);
            a[k] = w;
            c[k] = w;
            rhs[k] = -f[i];
        }
        let diag: Vec<f64> = d[1..n - 1].to_vec();
        let du = solve_tridiagonal(&a, &diag, &c, &rhs)?;
        step = 1.0;
        loop {
            let trial: Vec<f64> = (0..n)
                .map(|i| if i == 0 || i == n - 1 { u[i] } else { u[i] + step * du[i - 1] })
                .collect();
            let (tf, td) = system(&bg.rho, &bg.kappa, h, r2, &trial);
            let tr = max_abs(&tf);
            if tr.is_finite() && (tr < res || tr <= opts.tol) {
                u = trial;
                f = tf;
                d = td;
                res = tr;
                break;
            }
            step *= 0.5;
            if step < 2f64.powi(-20) {
                if res <= roundoff_floor(bg, &u) {
                    break;
                }
                return Err(Error::NewtonDiverged(format!("line search failed at residual {res:.3e}")));
            }
        }
        if step < 2f64.powi(-20) {
            break;
        }
    }
    let mut sol = WangSolution1D {
        bg: bg.clone(),
        residue: [r.re, r.im],
        u,
        iterations,
        residual: res,
        super_b: None,
    };
    if bg.is_hyperbolic_type() {
        let rep = check_sub_super(bg, r, &sol.u)?;
        if !rep.bracketed {
            return Err(Error::BracketViolated(format!(
                "min u = {:.3e}, max u − S = {:.3e}",
                rep.min_u, rep.max_excess
            )));
        }
        sol.super_b = Some(rep.b);
    }
    Ok(sol)
}

#[cfg(test)]
mod tests {
    use super::super::{make_background, BackgroundKind, BackgroundParams};
    use super::*;

    #[test]
    fn constant_values() {
        assert!((constant_solution(Complex64::new(1.0, 0.0)).unwrap() - 0.231049).abs() < 1e-6);
        assert!((constant_solution(Complex64::new(2.0, 0.0)).unwrap() - 2f64.ln()).abs() < 1e-15);
        let r = Complex64::new(0.3, -1.7);
        let u = constant_solution(r).unwrap();
        assert!((r.norm_sqr() * (-3.0 * u).exp() - 0.5).abs() < 1e-14);
        assert_eq!(constant_solution(Complex64::new(0.0, 0.0)), Err(Error::ZeroResidue));
    }

    #[test]
    fn flat_cylinder() {
        let bg = make_background(BackgroundKind::Flat { density: 1.0 }, Default::default()).unwrap();
        let r = Complex64::new(1.0, 0.0);
        let uc = constant_solution(r).unwrap();
        let sol = solve_wang_1d(&bg, r, BoundarySpec::Dirichlet { left: uc, right: uc }, 1e-10).unwrap();
        let n = sol.u.len();
        for &u in &sol.u[n / 3..2 * n / 3] {
            assert!((u - 0.231049).abs() < 1e-6);
        }
    }

    #[test]
    fn cusp_zero_residue_is_hyperbolic() {
        let bg = make_background(
            BackgroundKind::Cusp { c: (-1f64).exp() },
            BackgroundParams { x_range: Some([-10.0, -0.1]), step: 1e-2 },
        )
        .unwrap();
        let sol = solve_wang_1d(&bg, Complex64::new(0.0, 0.0), BoundarySpec::Model, 1e-10).unwrap();
        assert!(max_abs(&sol.u) < 1e-12);
        let rep = check_sub_super(&bg, Complex64::new(0.0, 0.0), &sol.u).unwrap();
        assert_eq!(rep.min_sub, 0.0);
    }

    #[test]
    fn collar_sub_solution_sign() {
        let bg = make_background(
            BackgroundKind::Collar { t: 1e-3, c: (-1f64).exp() },
            BackgroundParams { x_range: None, step: 1e-2 },
        )
        .unwrap();
        let r = Complex64::new(0.3, 0.0);
        let sol = solve_wang_1d(&bg, r, BoundarySpec::Model, 1e-10).unwrap();
        let rep = check_sub_super(&bg, r, &sol.u).unwrap();
        assert!(rep.sub_ok && rep.super_ok && rep.bracketed, "{rep:?}");
        assert!(sol.u.iter().all(|&u| u >= -1e-8));
    }

    #[test]
    fn grafted_bracket() {
        let bg = make_background(
            BackgroundKind::GraftedFlat { t: 1e-3, c: (-1f64).exp() },
            BackgroundParams { x_range: None, step: 1e-2 },
        )
        .unwrap();
        let r = Complex64::new(0.3, 0.0);
        let sol = solve_wang_1d(&bg, r, BoundarySpec::Model, 1e-10).unwrap();
        let uh = sol.relative_to_hyperbolic().unwrap();
        let s = sol.super_solution().unwrap();
        for (u, s) in uh.iter().zip(&s) {
            assert!(*u >= -BRACKET_EPS && *u <= s + BRACKET_EPS);
        }
        assert!(sol.pde_residual() <= 1e-10);
    }

    #[test]
    fn second_order_refinement() {
        let kind = BackgroundKind::Collar { t: 1e-3, c: (-1f64).exp() };
        let r = Complex64::new(0.3, 0.2);
        let solve = |step: f64| {
            let bg = make_background(kind, BackgroundParams { x_range: Some([-6.0, -1.0]), step }).unwrap();
            solve_wang_1d(&bg, r, BoundarySpec::Dirichlet { left: 0.1, right: 0.05 }, 1e-12).unwrap()
        };
        let fine = solve(1e-3 / 8.0);
        let err = |s: &WangSolution1D| {
            s.bg.x.iter().zip(&s.u).map(|(&x, u)| (u - fine.value_at(x).unwrap()).abs()).fold(0.0, f64::max)
        };
        let e1 = err(&solve(4e-3));
        let e2 = err(&solve(2e-3));
        assert!(e1 / e2 >= 3.0, "{e1} {e2}");
    }
}
