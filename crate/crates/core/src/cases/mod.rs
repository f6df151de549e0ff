//! Built-in systems: flat Laplace systems, σ-models and the GUP-modified
//! Klein-Gordon pair, with closed-form and special-function solutions.

use thiserror::Error;

use crate::expr::{Expr, Substitution, Symbol};
use crate::geometry::{GeometryError, Metric, Role};
use crate::symmetry::{euler_lagrange, QuasilinearSystem, SymmetryError};

pub mod solutions;
pub mod special;

#[cfg(test)]
mod tests;

pub use solutions::{
    gup_hyperbolic_solution, gup_minkowski_solution, gup_transform_solution, gup_transformed_constants, sample_points,
    verify_solution, FieldSolution, Form, HyperbolicKind, Mode, ResidualReport, SolutionField, SpecialSpec, SpecialTerm,
};
pub use special::{bessel_i, bessel_k, gamma, hyp2f1, legendre_p, Special, SpecialError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CaseError {
    #[error("K = 0 gives the flat target; use the Laplace constructor")]
    ZeroCurvature,
    #[error("beta hbar^2 = 0 degenerates the field metric")]
    DegenerateGup,
    #[error("complex exponents for these parameters ({0}); use the numeric solutions")]
    ComplexExponents(String),
    #[error("constructed system differs from its displayed form in equation {0}")]
    DisplayMismatch(usize),
    #[error("solution has {got} fields, system has {expected}")]
    FieldCount { expected: usize, got: usize },
    #[error("unknown case '{0}'")]
    UnknownCase(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Symmetry(#[from] SymmetryError),
    #[error(transparent)]
    Special(#[from] SpecialError),
    #[error("evaluation failed: {0}")]
    Eval(String),
}

/// Coordinate names `x, y, z, w`, then `x1..xn` beyond four.
pub fn coordinate_names(n: usize) -> Vec<String> {
    if n <= 4 {
        ["x", "y", "z", "w"][..n].iter().map(|s| s.to_string()).collect()
    } else {
        (1..=n).map(|i| format!("x{i}")).collect()
    }
}

/// Field names `u` or `u1..um`.
pub fn field_names(m: usize) -> Vec<String> {
    if m == 1 {
        vec!["u".into()]
    } else {
        (1..=m).map(|i| format!("u{i}")).collect()
    }
}

pub fn euclidean(n: usize) -> Result<Metric, CaseError> {
    let x = coordinate_names(n).iter().map(|s| Symbol::coord(s)).collect();
    Ok(Metric::diagonal(x, vec![Expr::one(); n], Role::Base)?)
}

pub fn flat_field_metric(m: usize) -> Result<Metric, CaseError> {
    let u = field_names(m).iter().map(|s| Symbol::field(s)).collect();
    Ok(Metric::diagonal(u, vec![Expr::one(); m], Role::Field)?)
}

/// `diag(1, -1, -1, -1)` in `t, x, y, z`.
pub fn minkowski() -> Metric {
    let x = ["t", "x", "y", "z"].iter().map(|s| Symbol::coord(s)).collect();
    let d = vec![Expr::one(), Expr::int(-1), Expr::int(-1), Expr::int(-1)];
    Metric::diagonal(x, d, Role::Base).expect("nondegenerate")
}

/// `dθ² - e^{2θ} dφ²`.
pub fn hyperbolic_plane() -> Metric {
    let th = Symbol::coord("theta");
    let ph = Symbol::coord("phi");
    let d = vec![Expr::one(), -(th.expr() * 2).exp()];
    Metric::diagonal(vec![th, ph], d, Role::Base).expect("nondegenerate")
}

/// `P^A = Δ_g u^A` for a flat field metric.
pub fn make_laplace_system(g: Metric, h: Metric) -> Result<QuasilinearSystem, CaseError> {
    Ok(euler_lagrange(g, h, Expr::zero())?)
}

/// `U = (1 + K/4 u·u)^{-2}`.
pub fn sigma_conformal_factor(k: &Expr, u: &[Symbol]) -> Expr {
    let r2: Expr = u.iter().map(|s| s.expr() * s.expr()).sum();
    (Expr::one() + k * &r2 * Expr::frac(1, 4)).powi(-2)
}

pub fn sigma_model_metric(k: &Expr, m: usize) -> Result<Metric, CaseError> {
    let u: Vec<Symbol> = field_names(m).iter().map(|s| Symbol::field(s)).collect();
    let w = sigma_conformal_factor(k, &u);
    Ok(Metric::diagonal(u, vec![w; m], Role::Field)?)
}

/// `C^A_BC = -c (u_C δ^A_B + u_B δ^A_C - u^A δ_BC)` with `c = factor`.
pub fn sigma_connection_formula(factor: &Expr, u: &[Symbol]) -> Vec<Vec<Vec<Expr>>> {
    let m = u.len();
    let d = |a: usize, b: usize| if a == b { Expr::one() } else { Expr::zero() };
    (0..m)
        .map(|a| {
            (0..m)
                .map(|b| {
                    (0..m)
                        .map(|c| -(factor * &(u[c].expr() * d(a, b) + u[b].expr() * d(a, c) - u[a].expr() * d(b, c))))
                        .collect()
                })
                .collect()
        })
        .collect()
}

/// Componentwise agreement of a connection formula with the Christoffel
/// symbols of `h`.
pub fn connection_matches(h: &Metric, c: &[Vec<Vec<Expr>>]) -> bool {
    let g = &h.christoffel().gamma;
    let z = crate::expr::ZeroTest::default();
    g.iter().flatten().flatten().zip(c.iter().flatten().flatten()).all(|(a, b)| z.is_zero(&(a - b)))
}

/// Connection factors for the σ-model: `K U / 2` as usually quoted, and
/// `K √U / 2` which is what the Christoffel symbols of `U δ` give.
pub fn sigma_connection_factors(k: &Expr, u: &[Symbol]) -> (Expr, Expr) {
    let r2: Expr = u.iter().map(|s| s.expr() * s.expr()).sum();
    let w = Expr::one() + k * &r2 * Expr::frac(1, 4);
    let quoted = k * &sigma_conformal_factor(k, u) * Expr::frac(1, 2);
    let actual = k * &w.recip() * Expr::frac(1, 2);
    (quoted, actual)
}

pub struct SigmaModel {
    pub system: QuasilinearSystem,
    /// The `K U / 2` connection agrees with the Christoffel symbols.
    pub quoted_connection_ok: bool,
    /// The `K √U / 2` connection agrees with the Christoffel symbols.
    pub actual_connection_ok: bool,
}

pub fn make_sigma_model(k: &Expr, m: usize, g: Metric) -> Result<SigmaModel, CaseError> {
    if k.is_zero() {
        return Err(CaseError::ZeroCurvature);
    }
    let h = sigma_model_metric(k, m)?;
    let u = h.coords().to_vec();
    let (quoted, actual) = sigma_connection_factors(k, &u);
    let quoted_connection_ok = connection_matches(&h, &sigma_connection_formula(&quoted, &u));
    let actual_connection_ok = connection_matches(&h, &sigma_connection_formula(&actual, &u));
    let system = euler_lagrange(g, h, Expr::zero())?;
    Ok(SigmaModel { system, quoted_connection_ok, actual_connection_ok })
}

/// `β, ħ, V₀` as expressions; symbols by default.
#[derive(Clone, Debug)]
pub struct GupParams {
    pub beta: Expr,
    pub hbar: Expr,
    pub v0: Expr,
}

impl Default for GupParams {
    fn default() -> Self {
        GupParams { beta: Symbol::param("beta").expr(), hbar: Symbol::param("hbar").expr(), v0: Symbol::param("V0").expr() }
    }
}

impl GupParams {
    pub fn new(beta: Expr, hbar: Expr, v0: Expr) -> Self {
        GupParams { beta, hbar, v0 }
    }

    /// `β ħ²`.
    pub fn b(&self) -> Expr {
        &self.beta * &(&self.hbar * &self.hbar)
    }

    /// `λ = √(1 - 8 V₀ β ħ²)`.
    pub fn lambda(&self) -> Expr {
        (Expr::one() - &self.v0 * &self.b() * Expr::int(8)).sqrt()
    }
}

pub fn gup_field_metric(p: &GupParams) -> Result<Metric, CaseError> {
    let b2 = p.b() * Expr::int(2);
    if b2.is_zero() {
        return Err(CaseError::DegenerateGup);
    }
    let u = vec![Symbol::field("Psi"), Symbol::field("Phi")];
    Ok(Metric::new(u, vec![vec![Expr::one(), b2.clone()], vec![b2, Expr::zero()]], Role::Field)?)
}

/// `V = ½ V₀ Ψ² - β ħ² Φ²`.
pub fn gup_potential(p: &GupParams) -> Expr {
    let psi = Symbol::field("Psi").expr();
    let phi = Symbol::field("Phi").expr();
    &p.v0 * &psi * &psi * Expr::frac(1, 2) - p.b() * &phi * &phi
}

/// The pair `Δ_g Ψ - Φ` and `2βħ² Δ_g Φ + V₀Ψ + Φ` in jet variables.
pub fn gup_displayed_equations(sys: &QuasilinearSystem, p: &GupParams) -> Vec<Expr> {
    let lap = |a: usize| -> Expr {
        let gi = sys.g.inverse_components();
        let mut t = Vec::new();
        for i in 0..sys.n() {
            for j in 0..sys.n() {
                if !gi[i][j].is_zero() {
                    t.push(&gi[i][j] * &sys.jets.u2(a, i, j));
                }
            }
            if !sys.gamma().comps[i].is_zero() {
                t.push(-(&sys.gamma().comps[i] * &sys.jets.u1(a, i)));
            }
        }
        t.into_iter().sum()
    };
    let psi = sys.u()[0].expr();
    let phi = sys.u()[1].expr();
    vec![lap(0) - &phi, p.b() * Expr::int(2) * lap(1) + &p.v0 * &psi + phi]
}

/// Euler-Lagrange system of the GUP Lagrangian, checked against the
/// displayed second-order pair (the second equation up to the factor `2βħ²`).
pub fn make_gup_system(g: Metric, p: &GupParams) -> Result<QuasilinearSystem, CaseError> {
    let h = gup_field_metric(p)?;
    let sys = euler_lagrange(g, h, gup_potential(p))?;
    let shown = gup_displayed_equations(&sys, p);
    let eqs = sys.equations();
    let scale = [Expr::one(), p.b() * Expr::int(2)];
    for a in 0..2 {
        if !sys.zero.is_zero(&(&eqs[a] * &scale[a] - &shown[a])) {
            return Err(CaseError::DisplayMismatch(a));
        }
    }
    Ok(sys)
}

/// Replace `u^A` and its jets by the given functions of `x`.
pub fn substitute_fields(sys: &QuasilinearSystem, fields: &[Expr], e: &Expr) -> Expr {
    let x = sys.x();
    let mut sub = Substitution::new();
    for (a, f) in fields.iter().enumerate() {
        sub.insert(sys.u()[a].clone(), f.clone());
        let d1: Vec<Expr> = x.iter().map(|s| f.diff(s)).collect();
        for i in 0..x.len() {
            sub.insert(sys.jets.jet(a, &[i]), d1[i].clone());
            for j in i..x.len() {
                sub.insert(sys.jets.jet(a, &[i, j]), d1[i].diff(&x[j]));
            }
        }
    }
    e.subs(&sub)
}

/// A test function with free coefficients: a general polynomial of degree
/// four plus an exponential with free rates.
pub fn generic_test_function(x: &[Symbol]) -> Expr {
    fn monomials(n: usize, deg: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for d in 0..=deg {
            for mut rest in monomials(n - 1, deg - d) {
                rest.insert(0, d);
                out.push(rest);
            }
        }
        out
    }
    let mut f = Expr::zero();
    for (k, e) in monomials(x.len(), 4).into_iter().enumerate() {
        let mut t = Symbol::param(&format!("a{k}")).expr();
        for (s, p) in x.iter().zip(e) {
            t = t * s.expr().powi(p as i64);
        }
        f = f + t;
    }
    let rate: Expr = x.iter().enumerate().map(|(i, s)| Symbol::param(&format!("k{i}")).expr() * s.expr()).sum();
    f + Symbol::param("q").expr() * rate.exp()
}

/// Outcome of eliminating `Φ = Δ_g Ψ` from the GUP pair.
#[derive(Clone, Debug)]
pub struct FourthOrderCheck {
    /// The first equation vanishes identically after the elimination.
    pub constraint_ok: bool,
    /// `Δ Ψ - 2βħ² Δ(ΔΨ) + V₀Ψ = 0`.
    pub minus_form: bool,
    /// `Δ Ψ + 2βħ² Δ(ΔΨ) + V₀Ψ = 0`.
    pub plus_form: bool,
}

pub fn fourth_order_check(g: &Metric, p: &GupParams) -> Result<FourthOrderCheck, CaseError> {
    let sys = make_gup_system(g.clone(), p)?;
    let f = generic_test_function(g.coords());
    let lf = g.laplacian(&f);
    let llf = g.laplacian(&lf);
    let eqs = sys.equations();
    let fields = [f.clone(), lf.clone()];
    let e0 = substitute_fields(&sys, &fields, &eqs[0]);
    let e1 = substitute_fields(&sys, &fields, &eqs[1]) * p.b() * Expr::int(2);
    let bb = p.b() * Expr::int(2);
    let minus = &lf - &(&bb * &llf) + &p.v0 * &f;
    let plus = &lf + &(&bb * &llf) + &p.v0 * &f;
    let z = &sys.zero;
    Ok(FourthOrderCheck { constraint_ok: z.is_zero(&e0), minus_form: z.is_zero(&(&e1 - &minus)), plus_form: z.is_zero(&(&e1 - &plus)) })
}

/// A built-in case by name.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CaseName {
    LaplaceFlat,
    SigmaModel,
    GupMinkowski,
    GupHyperbolic,
}

impl std::str::FromStr for CaseName {
    type Err = CaseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "laplace-flat" => Ok(CaseName::LaplaceFlat),
            "sigma-model" => Ok(CaseName::SigmaModel),
            "gup-minkowski" => Ok(CaseName::GupMinkowski),
            "gup-hyperbolic" => Ok(CaseName::GupHyperbolic),
            _ => Err(CaseError::UnknownCase(s.into())),
        }
    }
}

impl std::fmt::Display for CaseName {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            CaseName::LaplaceFlat => "laplace-flat",
            CaseName::SigmaModel => "sigma-model",
            CaseName::GupMinkowski => "gup-minkowski",
            CaseName::GupHyperbolic => "gup-hyperbolic",
        })
    }
}
