//! Jet-space verification of candidate generators: prolongation, the Lie
//! point-symmetry condition, the Noether condition with its gauge, and
//! conservation currents.

mod jets;
mod system;

use thiserror::Error;

pub use jets::JetSpace;
pub use system::{euler_lagrange, QuasilinearSystem};

use crate::collineations::matching::coefficients;
use crate::expr::integrate::{integrate, potential};
use crate::expr::{Expr, Symbol, SymbolClass, ZeroVerdict};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymmetryError {
    #[error("base dimension must be at least 2, got {0}")]
    BaseDimension(usize),
    #[error("expected {expected} components, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("force term is not H^AB V_,B")]
    InconsistentForce,
    #[error("system differs from the Euler operator of its Lagrangian in component {0}")]
    VariationalMismatch(usize),
    #[error("generator ξ depends on the dependent variables")]
    XiDependsOnU,
    #[error("system has no Lagrangian")]
    NoLagrangian,
    #[error(transparent)]
    Geometry(#[from] crate::geometry::GeometryError),
}

/// `X = ξ^i ∂_i + η^A ∂_A`.
#[derive(Clone, Debug, PartialEq)]
pub struct Generator {
    pub xi: Vec<Expr>,
    pub eta: Vec<Expr>,
    pub label: String,
}

fn u_dependent(e: &Expr) -> bool {
    e.symbols().iter().any(|s| s.class() == SymbolClass::CoordU)
}

impl Generator {
    /// `ξ` must be free of dependent variables.
    pub fn new(xi: Vec<Expr>, eta: Vec<Expr>, label: &str) -> Result<Generator, SymmetryError> {
        if xi.iter().any(u_dependent) {
            return Err(SymmetryError::XiDependsOnU);
        }
        Ok(Generator { xi, eta, label: label.to_string() })
    }

    /// No check on `ξ`; for exercising the checkers' rejection path.
    pub fn new_unchecked(xi: Vec<Expr>, eta: Vec<Expr>, label: &str) -> Generator {
        Generator { xi, eta, label: label.to_string() }
    }

    pub fn zero(n: usize, m: usize) -> Generator {
        Generator { xi: vec![Expr::zero(); n], eta: vec![Expr::zero(); m], label: "0".into() }
    }

    pub fn xi_depends_on_u(&self) -> bool {
        self.xi.iter().any(u_dependent)
    }

    pub fn scale(&self, c: &Expr) -> Generator {
        Generator {
            xi: self.xi.iter().map(|e| e * c).collect(),
            eta: self.eta.iter().map(|e| e * c).collect(),
            label: format!("{}*({})", c, self.label),
        }
    }

    pub fn add(&self, o: &Generator) -> Generator {
        Generator {
            xi: self.xi.iter().zip(&o.xi).map(|(a, b)| a + b).collect(),
            eta: self.eta.iter().zip(&o.eta).map(|(a, b)| a + b).collect(),
            label: format!("{} + {}", self.label, o.label),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.xi.iter().chain(&self.eta).all(|e| e.is_zero())
    }
}

/// Prolonged coefficients `η^A_i` and `η^A_ij` (symmetric in `ij`).
#[derive(Clone, Debug)]
pub struct Prolongation {
    pub first: Vec<Vec<Expr>>,
    pub second: Vec<Vec<Vec<Expr>>>,
}

/// Second prolongation: `η^A_i = D_i η^A - u^A_k D_i ξ^k`,
/// `η^A_ij = D_j η^A_i - u^A_ik D_j ξ^k`.
pub fn prolong(x: &Generator, sys: &QuasilinearSystem) -> Prolongation {
    let (n, m) = (sys.n(), sys.m());
    let j = &sys.jets;
    let dxi: Vec<Vec<Expr>> = (0..n).map(|i| x.xi.iter().map(|xk| j.total(xk, i)).collect()).collect();
    let mut first = vec![vec![Expr::zero(); n]; m];
    let mut second = vec![vec![vec![Expr::zero(); n]; n]; m];
    for a in 0..m {
        for i in 0..n {
            let mut e = j.total(&x.eta[a], i);
            for k in 0..n {
                if !dxi[i][k].is_zero() {
                    e = e - j.u1(a, k) * &dxi[i][k];
                }
            }
            first[a][i] = e;
        }
        for i in 0..n {
            for jj in i..n {
                let mut e = j.total(&first[a][i], jj);
                for k in 0..n {
                    if !dxi[jj][k].is_zero() {
                        e = e - j.u2(a, i, k) * &dxi[jj][k];
                    }
                }
                second[a][i][jj] = e.clone();
                second[a][jj][i] = e;
            }
        }
    }
    Prolongation { first, second }
}

#[derive(Clone, Debug)]
pub struct LieCheckResult {
    pub verdict: bool,
    /// `κ^A_D` with `X^[2]P^A = κ^A_D P^D` on success.
    pub kappa: Vec<Vec<Expr>>,
    /// Nonzero jet-monomial coefficients of the remainder.
    pub residual: Vec<Expr>,
    pub probabilistic: bool,
    pub reason: Option<String>,
}

/// `X^[2] f` for a function of `x`, `u`, first and second jets.
pub fn apply_prolonged(x: &Generator, pr: &Prolongation, sys: &QuasilinearSystem, f: &Expr) -> Expr {
    let (n, m) = (sys.n(), sys.m());
    let j = &sys.jets;
    let mut t = Vec::new();
    for i in 0..n {
        if !x.xi[i].is_zero() {
            t.push(&x.xi[i] * &f.diff(&sys.x()[i]));
        }
    }
    for a in 0..m {
        if !x.eta[a].is_zero() {
            t.push(&x.eta[a] * &f.diff(&sys.u()[a]));
        }
        for i in 0..n {
            let d = f.diff(&j.jet(a, &[i]));
            if !d.is_zero() {
                t.push(&pr.first[a][i] * &d);
            }
            for k in i..n {
                let d = f.diff(&j.jet(a, &[i, k]));
                if !d.is_zero() {
                    t.push(&pr.second[a][i][k] * &d);
                }
            }
        }
    }
    t.into_iter().sum()
}

/// Split a remainder into its jet-monomial coefficients (first and second
/// jets of the dependent fields) and zero-test them.
fn remainder(sys: &QuasilinearSystem, r: &Expr, probabilistic: &mut bool) -> Vec<Expr> {
    let mut vars = sys.jets.first_jets();
    vars.extend(sys.jets.second_jets());
    let parts = coefficients(r, &vars).unwrap_or_else(|| vec![(Expr::one(), 0, r.clone())]);
    let mut out = Vec::new();
    for (_, _, c) in parts {
        match sys.zero.check(&c) {
            Ok(ZeroVerdict::Zero { probabilistic: p }) => *probabilistic |= p,
            _ => out.push(c),
        }
    }
    out
}

/// Is `X` a Lie point symmetry of the system: `X^[2]P^A = κ^A_D P^D`.
pub fn check_lie_condition(sys: &QuasilinearSystem, x: &Generator) -> LieCheckResult {
    let m = sys.m();
    if x.xi_depends_on_u() {
        return LieCheckResult {
            verdict: false,
            kappa: Vec::new(),
            residual: Vec::new(),
            probabilistic: false,
            reason: Some("ξ depends on the dependent variables; ξ^i_,B must vanish".into()),
        };
    }
    let pr = prolong(x, sys);
    let eqs = sys.equations();
    let p = sys.trace_index();
    let gpp = sys.g.inverse_components()[p][p].clone();
    let aux = sys.aux_on_shell();
    let mut kappa = vec![vec![Expr::zero(); m]; m];
    let mut residual = Vec::new();
    let mut probabilistic = false;
    for a in 0..m {
        let e = apply_prolonged(x, &pr, sys, &eqs[a]);
        let mut r = e.clone();
        for d in 0..m {
            let k = e.diff(&sys.jets.jet(d, &[p, p])) / &gpp;
            if !k.is_zero() {
                r = r - &k * &eqs[d];
            }
            kappa[a][d] = k;
        }
        if !aux.is_empty() {
            r = r.subs(&aux);
        }
        residual.extend(remainder(sys, &r, &mut probabilistic));
    }
    let verdict = residual.is_empty();
    LieCheckResult { verdict, kappa, residual, probabilistic, reason: None }
}

#[derive(Clone, Debug, PartialEq)]
pub enum NoetherVerdict {
    Noether,
    NotNoether,
    /// Integrability holds but the gauge has no closed form.
    GaugeUnavailable,
}

#[derive(Clone, Debug)]
pub struct NoetherResult {
    pub verdict: NoetherVerdict,
    pub gauge: Option<Vec<Expr>>,
    pub residual: Vec<Expr>,
    pub probabilistic: bool,
    pub reason: Option<String>,
}

impl NoetherResult {
    pub fn is_noether(&self) -> bool {
        self.verdict == NoetherVerdict::Noether
    }

    fn fail(reason: &str, residual: Vec<Expr>, verdict: NoetherVerdict) -> NoetherResult {
        NoetherResult { verdict, gauge: None, residual, probabilistic: false, reason: Some(reason.into()) }
    }
}

/// `X^[1]L + L D_i ξ^i`.
pub fn noether_lhs(sys: &QuasilinearSystem, x: &Generator) -> Result<Expr, SymmetryError> {
    let l = sys.lagrangian().ok_or(SymmetryError::NoLagrangian)?;
    let pr = prolong(x, sys);
    let div: Expr = (0..sys.n()).map(|i| sys.jets.total(&x.xi[i], i)).sum();
    Ok(apply_prolonged(x, &pr, sys, &l) + l * div)
}

/// Is `X` a Noether point symmetry: `X^[1]L + L D_iξ^i = D_i A^i` for some
/// gauge `A^i(x, u)`, which is reconstructed.
pub fn check_noether_condition(sys: &QuasilinearSystem, x: &Generator) -> Result<NoetherResult, SymmetryError> {
    let (n, m) = (sys.n(), sys.m());
    if x.xi_depends_on_u() {
        return Ok(NoetherResult::fail("ξ depends on the dependent variables", Vec::new(), NoetherVerdict::NotNoether));
    }
    let lhs = noether_lhs(sys, x)?;
    let jets = sys.jets.first_jets();
    let Some(parts) = coefficients(&lhs, &jets) else {
        return Ok(NoetherResult::fail("not polynomial in first jets", vec![lhs], NoetherVerdict::NotNoether));
    };
    let mut probabilistic = false;
    let mut high = Vec::new();
    let mut grad = vec![vec![Expr::zero(); m]; n];
    let mut r0 = Expr::zero();
    for (key, deg, c) in parts {
        match deg {
            0 => r0 = c,
            1 => {
                let s = &key.symbols()[0];
                let (a, idx) = sys.jets.lookup(s).expect("first jet");
                grad[idx[0]][a] = c;
            }
            _ => match sys.zero.check(&c) {
                Ok(ZeroVerdict::Zero { probabilistic: p }) => probabilistic |= p,
                _ => high.push(c),
            },
        }
    }
    if !high.is_empty() {
        return Ok(NoetherResult::fail("terms of degree two or more in first jets", high, NoetherVerdict::NotNoether));
    }
    let u = sys.u();
    let mut gauge = Vec::with_capacity(n);
    for gi in grad.iter() {
        for b in 0..m {
            for c in b + 1..m {
                let d = gi[b].diff(&u[c]) - gi[c].diff(&u[b]);
                if !sys.zero.is_zero(&d) {
                    return Ok(NoetherResult::fail("gauge u-gradient is not closed", vec![d], NoetherVerdict::NotNoether));
                }
            }
        }
        match potential(gi, u) {
            Some(a) => gauge.push(a),
            None => return Ok(NoetherResult::fail("gauge u-potential unavailable", Vec::new(), NoetherVerdict::GaugeUnavailable)),
        }
    }
    let mut r = r0 - (0..n).map(|i| sys.jets.partial_x(&gauge[i], i)).sum::<Expr>();
    let aux = sys.aux_on_shell();
    if !aux.is_empty() {
        r = r.subs(&aux);
    }
    if let Ok(ZeroVerdict::Zero { probabilistic: p }) = sys.zero.check(&r) {
        return Ok(NoetherResult { verdict: NoetherVerdict::Noether, gauge: Some(gauge), residual: Vec::new(), probabilistic: probabilistic | p, reason: None });
    }
    if u.iter().any(|s| !sys.zero.is_zero(&r.diff(s))) {
        return Ok(NoetherResult::fail("u-dependent remainder", vec![r], NoetherVerdict::NotNoether));
    }
    if r.symbols().iter().any(|s| s.class() == SymbolClass::Jet) {
        return Ok(NoetherResult::fail("remainder depends on auxiliary fields", vec![r], NoetherVerdict::GaugeUnavailable));
    }
    // x-only remainder: absorb it into A^1 as Φ(x)
    match integrate(&r, &sys.x()[0]) {
        Some(phi) if sys.zero.is_zero(&(phi.diff(&sys.x()[0]) - &r)) => {
            gauge[0] = &gauge[0] + &phi;
            Ok(NoetherResult { verdict: NoetherVerdict::Noether, gauge: Some(gauge), residual: Vec::new(), probabilistic, reason: None })
        }
        _ => Ok(NoetherResult::fail("x-dependent gauge term unavailable", vec![r], NoetherVerdict::GaugeUnavailable)),
    }
}

/// Check a caller-supplied gauge: `X^[1]L + L D_iξ^i - D_iA^i = 0`.
pub fn verify_noether_gauge(sys: &QuasilinearSystem, x: &Generator, gauge: &[Expr]) -> Result<bool, SymmetryError> {
    if x.xi_depends_on_u() {
        return Ok(false);
    }
    let lhs = noether_lhs(sys, x)?;
    let mut r = lhs - (0..sys.n()).map(|i| sys.jets.total(&gauge[i], i)).sum::<Expr>();
    let aux = sys.aux_on_shell();
    if !aux.is_empty() {
        r = r.subs(&aux);
    }
    Ok(sys.zero.is_zero(&r))
}

/// Conserved current `I^i` with its gauge `A^i`.
#[derive(Clone, Debug, PartialEq)]
pub struct Current {
    pub i: Vec<Expr>,
    pub a: Vec<Expr>,
}

/// `I^i = ξ^k (u^A_k ∂L/∂u^A_i - δ^i_k L) - η^A ∂L/∂u^A_i + A^i`.
pub fn conservation_current(sys: &QuasilinearSystem, x: &Generator, gauge: &[Expr]) -> Result<Current, SymmetryError> {
    let (n, m) = (sys.n(), sys.m());
    let l = sys.lagrangian().ok_or(SymmetryError::NoLagrangian)?;
    let j = &sys.jets;
    let dl: Vec<Vec<Expr>> = (0..m).map(|a| (0..n).map(|i| l.diff(&j.jet(a, &[i]))).collect()).collect();
    let comps = (0..n)
        .map(|i| {
            let mut t = Vec::new();
            for k in 0..n {
                if x.xi[k].is_zero() {
                    continue;
                }
                let mut s: Expr = (0..m).map(|a| j.u1(a, k) * &dl[a][i]).sum();
                if i == k {
                    s = s - &l;
                }
                t.push(&x.xi[k] * &s);
            }
            for a in 0..m {
                if !x.eta[a].is_zero() {
                    t.push(-(&x.eta[a] * &dl[a][i]));
                }
            }
            t.push(gauge[i].clone());
            t.into_iter().sum()
        })
        .collect();
    Ok(Current { i: comps, a: gauge.to_vec() })
}

/// `D_i I^i` after replacing each trace by its on-shell value.
pub fn on_shell_divergence(sys: &QuasilinearSystem, c: &Current) -> Expr {
    let div: Expr = (0..sys.n()).map(|i| sys.jets.total(&c.i[i], i)).sum();
    div.subs(&sys.on_shell())
}

pub fn check_on_shell_divergence(sys: &QuasilinearSystem, c: &Current) -> bool {
    sys.zero.is_zero(&on_shell_divergence(sys, c))
}

/// Coordinates and fields as symbols for building generators by hand.
pub fn coordinate_exprs(s: &[Symbol]) -> Vec<Expr> {
    s.iter().map(|s| s.expr()).collect()
}

#[cfg(test)]
mod tests;
