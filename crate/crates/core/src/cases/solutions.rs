//! Closed-form and special-function solutions of the GUP pair, the point
//! transformation generated by `Z`, and residual verification.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::expr::{bits_for_digits, Bindings, Expr, Real, Symbol, Q};
use crate::symmetry::QuasilinearSystem;

use super::special::Special;
use super::{minkowski, substitute_fields, CaseError, GupParams};

/// A special function whose parameters are expressions in the case parameters.
#[derive(Clone, Debug)]
pub enum SpecialSpec {
    BesselI(Expr),
    BesselK(Expr),
    Hyp2F1(Expr, Expr, Expr),
}

impl SpecialSpec {
    fn resolve(&self, b: &Bindings, digits: u32) -> Result<Special, CaseError> {
        let ev = |e: &Expr| e.eval_float(b, digits + 10).map_err(|e| CaseError::Eval(e.to_string()));
        Ok(match self {
            SpecialSpec::BesselI(n) => Special::BesselI(ev(n)?),
            SpecialSpec::BesselK(n) => Special::BesselK(ev(n)?),
            SpecialSpec::Hyp2F1(a, c, d) => Special::Hyp2F1(ev(a)?, ev(c)?, ev(d)?),
        })
    }
}

/// `prefactor · f(arg)`.
#[derive(Clone, Debug)]
pub struct SpecialTerm {
    pub prefactor: Expr,
    pub func: SpecialSpec,
    pub arg: Expr,
}

/// A closed part plus special-function terms.
#[derive(Clone, Debug, Default)]
pub struct SolutionField {
    pub closed: Expr,
    pub terms: Vec<SpecialTerm>,
}

impl SolutionField {
    pub fn closed(e: Expr) -> Self {
        SolutionField { closed: e, terms: Vec::new() }
    }

    fn scale(&self, k: &Expr) -> SolutionField {
        SolutionField {
            closed: &self.closed * k,
            terms: self.terms.iter().map(|t| SpecialTerm { prefactor: &t.prefactor * k, ..t.clone() }).collect(),
        }
    }

    fn add(&self, o: &SolutionField) -> SolutionField {
        let mut terms = self.terms.clone();
        terms.extend(o.terms.iter().cloned());
        SolutionField { closed: &self.closed + &o.closed, terms }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Symbolic,
    Numeric,
}

#[derive(Clone, Debug)]
pub struct FieldSolution {
    pub name: String,
    pub fields: Vec<SolutionField>,
    pub notes: Vec<String>,
}

impl FieldSolution {
    pub fn mode(&self) -> Mode {
        if self.fields.iter().all(|f| f.terms.is_empty()) {
            Mode::Symbolic
        } else {
            Mode::Numeric
        }
    }

    pub fn zero(name: &str, m: usize) -> FieldSolution {
        FieldSolution { name: name.into(), fields: vec![SolutionField::default(); m], notes: Vec::new() }
    }
}

fn check_real(p: &GupParams, radicands: &[Expr]) -> Result<(), CaseError> {
    for r in radicands {
        if let Some(q) = r.eval_exact(&Bindings::new()) {
            if q < Q::from_integer(0.into()) {
                return Err(CaseError::ComplexExponents(r.to_string()));
            }
        } else if let Ok(v) = r.eval_f64(&Bindings::new()) {
            if v < 0.0 {
                return Err(CaseError::ComplexExponents(r.to_string()));
            }
        }
    }
    let _ = p;
    Ok(())
}

/// `Ψ = e^{ct}(c₁e^{μx} + c₂e^{-μx} + c₃e^{νx} + c₄e^{-νx})`, `Φ = □Ψ`.
pub fn gup_minkowski_solution(p: &GupParams, c: &Expr, cs: &[Expr; 4]) -> Result<FieldSolution, CaseError> {
    let b = p.b();
    let lam = p.lambda();
    let r_mu = c * c * &b * &b * Expr::int(4) + &b * &(Expr::one() - &lam);
    let r_nu = c * c * &b * &b * Expr::int(4) + &b * &(Expr::one() + &lam);
    check_real(p, &[Expr::one() - &p.v0 * &b * Expr::int(8), r_mu.clone(), r_nu.clone()])?;
    let half_b = (&b * Expr::int(2)).recip();
    let mu = r_mu.sqrt() * &half_b;
    let nu = r_nu.sqrt() * &half_b;
    let t = Symbol::coord("t").expr();
    let x = Symbol::coord("x").expr();
    let psi = (c * &t).exp()
        * (&cs[0] * (&mu * &x).exp() + &cs[1] * (-(&mu * &x)).exp() + &cs[2] * (&nu * &x).exp() + &cs[3] * (-(&nu * &x)).exp());
    let phi = minkowski().laplacian(&psi);
    Ok(FieldSolution {
        name: "gup-minkowski".into(),
        fields: vec![SolutionField::closed(psi), SolutionField::closed(phi)],
        notes: Vec::new(),
    })
}

/// The flow of `Z = A¹ + 2βħ²A³ - V₀A⁴` at parameter `ε`.
pub fn gup_transform_solution(sol: &FieldSolution, p: &GupParams, eps: &Expr) -> Result<FieldSolution, CaseError> {
    if sol.fields.len() != 2 {
        return Err(CaseError::FieldCount { expected: 2, got: sol.fields.len() });
    }
    let (b, lam, v0) = (p.b(), p.lambda(), p.v0.clone());
    let one = Expr::one();
    let pre = ((&one - &lam) * eps * Expr::frac(1, 2)).exp() * (&lam * Expr::int(2)).recip();
    let e = (eps * &lam).exp();
    let b4 = &b * Expr::int(4);
    let v2 = &v0 * Expr::int(2);
    // Ψ̄ = pre[(4bΦ + (1+λ)Ψ)e - (4bΦ + (1-λ)Ψ)]
    let psi_psi = &pre * &((&one + &lam) * &e - (&one - &lam));
    let psi_phi = &pre * &(&b4 * &e - &b4);
    // Φ̄ = pre[((λ-1)Φ - 2V₀Ψ)e + ((1+λ)Φ + 2V₀Ψ)]
    let phi_psi = &pre * &(-(&v2 * &e) + &v2);
    let phi_phi = &pre * &((&lam - &one) * &e + (&one + &lam));
    let (ps, ph) = (&sol.fields[0], &sol.fields[1]);
    Ok(FieldSolution {
        name: format!("{} transformed", sol.name),
        fields: vec![ps.scale(&psi_psi).add(&ph.scale(&psi_phi)), ps.scale(&phi_psi).add(&ph.scale(&phi_phi))],
        notes: sol.notes.clone(),
    })
}

/// Constants after the `Z` flow. `printed` uses `exp(-(1±λ)ε/2)`; otherwise
/// the `μ`-modes pick up `exp((1+λ)ε/2)` and the `ν`-modes `exp((1-λ)ε/2)`.
pub fn gup_transformed_constants(p: &GupParams, eps: &Expr, cs: &[Expr; 4], printed: bool) -> [Expr; 4] {
    let lam = p.lambda();
    let sign = if printed { Expr::int(-1) } else { Expr::one() };
    let a = (&sign * &(Expr::one() + &lam) * eps * Expr::frac(1, 2)).exp();
    let c = (&sign * &(Expr::one() - &lam) * eps * Expr::frac(1, 2)).exp();
    [&a * &cs[0], &a * &cs[1], &c * &cs[2], &c * &cs[3]]
}

/// Which reduction produced a hyperbolic-plane solution.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HyperbolicKind {
    /// `X¹ + αY`: Bessel functions of `α e^{-θ}`.
    X1,
    /// `X² + κY`: Ferrers functions of `φ e^θ` (first kind only).
    X2,
    /// `X³ + σY`: Bessel functions.
    X3,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Form {
    /// As usually displayed.
    Printed,
    /// The form that solves the system.
    Corrected,
    /// `X1` only: the `e^{-θ/2}` factor on the first bracket alone.
    FirstBracketOnly,
}

/// Bessel orders `μ̄, ν̄` and the matching eigenvalues of `Δ_g`.
pub fn hyperbolic_orders(p: &GupParams) -> [(Expr, Expr); 2] {
    let b = p.b();
    let lam = p.lambda();
    let den = (b.sqrt() * Expr::int(2)).recip();
    let mu = -((&b - Expr::one() - &lam).sqrt() * &den);
    let nu = -((&b - Expr::one() + &lam).sqrt() * &den);
    let q = (&b * Expr::int(4)).recip();
    let s_mu = -((Expr::one() + &lam) * &q);
    let s_nu = -((Expr::one() - &lam) * &q);
    [(mu, s_mu), (nu, s_nu)]
}

/// Special-function solution on the hyperbolic plane. `Φ = Δ_g Ψ` is built
/// mode by mode from the eigenvalue of each bracket.
pub fn gup_hyperbolic_solution(
    p: &GupParams,
    kind: HyperbolicKind,
    form: Form,
    param: &Expr,
    bs: &[Expr; 4],
) -> Result<FieldSolution, CaseError> {
    let th = Symbol::coord("theta").expr();
    let ph = Symbol::coord("phi").expr();
    let orders = hyperbolic_orders(p);
    let mut psi = SolutionField::default();
    let mut phi = SolutionField::default();
    let mut notes = Vec::new();
    let mut push = |pref: Expr, func: SpecialSpec, arg: Expr, s: &Expr, c: &Expr| {
        if c.is_zero() {
            return;
        }
        let t = SpecialTerm { prefactor: &pref * c, func, arg };
        phi.terms.push(SpecialTerm { prefactor: &t.prefactor * s, ..t.clone() });
        psi.terms.push(t);
    };
    let half = Expr::frac(1, 2);
    match kind {
        HyperbolicKind::X1 => {
            let arg = param * &(-&th).exp();
            for (k, (ord, s)) in orders.iter().enumerate() {
                let mut pref = (param * &ph).exp();
                if k == 0 || form != Form::FirstBracketOnly {
                    pref = pref * (-(&th * &half)).exp();
                }
                push(pref.clone(), SpecialSpec::BesselK(ord.clone()), arg.clone(), s, &bs[2 * k]);
                push(pref, SpecialSpec::BesselI(ord.clone()), arg.clone(), s, &bs[2 * k + 1]);
            }
        }
        HyperbolicKind::X2 => {
            let z = &ph * &th.exp();
            let one = Expr::one();
            let ferrers = ((&one + &z).ln() - (&one - &z).ln()) * param * &half;
            let w = (&one - &z) * &half;
            for (k, (ord, s)) in orders.iter().enumerate() {
                let pref = match form {
                    Form::Printed => {
                        let base = -((&one + &z * &z).ln() * param * &half);
                        if k == 0 { base + param * &th } else { base }
                    }
                    _ => param * &th - (&one - &z * &z).ln() * param * &half,
                };
                let f = SpecialSpec::Hyp2F1(ord + &half, &half - ord, &one - param);
                push((pref + &ferrers).exp(), f, w.clone(), s, &bs[2 * k]);
            }
            if !bs[1].is_zero() || !bs[3].is_zero() {
                notes.push("second-kind Ferrers terms dropped; only the first kind is evaluated".into());
            }
            notes.push("Ferrers functions normalised without the constant 1/Gamma(1 - order)".into());
        }
        HyperbolicKind::X3 => {
            let e2 = (&th * Expr::int(2)).exp();
            let z2 = &ph * &ph * &e2;
            let (pref, arg) = match form {
                Form::Corrected => {
                    let d = &z2 - Expr::one();
                    let pref = (param * &ph * &e2 / &d).exp() * (th.exp() / &d).sqrt();
                    (pref, param * &th.exp() / &d)
                }
                _ => {
                    let d = &z2 + Expr::one();
                    ((param * &ph * &e2 / &d).exp(), param * &e2 / &d)
                }
            };
            for (k, (ord, s)) in orders.iter().enumerate() {
                push(pref.clone(), SpecialSpec::BesselK(ord.clone()), arg.clone(), s, &bs[2 * k]);
                push(pref.clone(), SpecialSpec::BesselI(ord.clone()), arg.clone(), s, &bs[2 * k + 1]);
            }
        }
    }
    let name = format!("gup-hyperbolic {:?} {:?}", kind, form).to_lowercase();
    Ok(FieldSolution { name, fields: vec![psi, phi], notes })
}

/// Residuals of a solution.
#[derive(Clone, Debug)]
pub struct ResidualReport {
    pub name: String,
    pub mode: Mode,
    pub passed: bool,
    /// Symbolic mode: zero established only by sampling.
    pub probabilistic: bool,
    pub max_residual: Option<f64>,
    pub per_equation: Vec<f64>,
    pub points_used: usize,
    pub skipped: Vec<String>,
    pub tol: f64,
}

struct TermDerivs {
    spec: SpecialSpec,
    p: Expr,
    dp: Vec<Expr>,
    ddp: Vec<Vec<Expr>>,
    a: Expr,
    da: Vec<Expr>,
    dda: Vec<Vec<Expr>>,
}

fn derivs(e: &Expr, x: &[Symbol]) -> (Vec<Expr>, Vec<Vec<Expr>>) {
    let d: Vec<Expr> = x.iter().map(|s| e.diff(s)).collect();
    let dd = d.iter().map(|di| x.iter().map(|s| di.diff(s)).collect()).collect();
    (d, dd)
}

type FieldJet = (Real, Vec<Real>, Vec<Vec<Real>>);

fn field_jet(
    closed: &(Expr, Vec<Expr>, Vec<Vec<Expr>>),
    terms: &[TermDerivs],
    b: &Bindings,
    digits: u32,
) -> Result<FieldJet, CaseError> {
    let ev = |e: &Expr| e.eval_float(b, digits).map_err(|e| CaseError::Eval(e.to_string()));
    let n = closed.1.len();
    let mut v = ev(&closed.0)?;
    let mut g: Vec<Real> = closed.1.iter().map(ev).collect::<Result<_, _>>()?;
    let mut h: Vec<Vec<Real>> = closed.2.iter().map(|r| r.iter().map(ev).collect()).collect::<Result<_, _>>()?;
    for t in terms {
        let f = t.spec.resolve(b, digits)?;
        let a = ev(&t.a)?;
        let [f0, f1, f2] = f.jet(&a, digits)?;
        let p = ev(&t.p)?;
        let dp: Vec<Real> = t.dp.iter().map(ev).collect::<Result<_, _>>()?;
        let da: Vec<Real> = t.da.iter().map(ev).collect::<Result<_, _>>()?;
        v = v + &p * &f0;
        for i in 0..n {
            g[i] = &g[i] + &(&dp[i] * &f0 + &p * &da[i] * &f1);
            for j in 0..n {
                let pij = ev(&t.ddp[i][j])?;
                let aij = ev(&t.dda[i][j])?;
                let mid = &dp[i] * &da[j] + &dp[j] * &da[i] + &p * &aij;
                h[i][j] = &h[i][j] + &(pij * &f0 + mid * &f1 + &p * &da[i] * &da[j] * &f2);
            }
        }
    }
    Ok((v, g, h))
}

/// Check a solution against a system: exactly for closed-form fields,
/// otherwise at the given points against `tol`.
pub fn verify_solution(
    sys: &QuasilinearSystem,
    sol: &FieldSolution,
    points: &[Bindings],
    tol: f64,
    digits: u32,
) -> Result<ResidualReport, CaseError> {
    if sol.fields.len() != sys.m() {
        return Err(CaseError::FieldCount { expected: sys.m(), got: sol.fields.len() });
    }
    let eqs = sys.equations();
    let mode = sol.mode();
    let mut rep = ResidualReport {
        name: sol.name.clone(),
        mode,
        passed: true,
        probabilistic: false,
        max_residual: None,
        per_equation: vec![0.0; eqs.len()],
        points_used: 0,
        skipped: Vec::new(),
        tol,
    };
    if mode == Mode::Symbolic {
        let fields: Vec<Expr> = sol.fields.iter().map(|f| f.closed.clone()).collect();
        for e in &eqs {
            let r = substitute_fields(sys, &fields, e);
            match sys.zero.check(&r) {
                Ok(v) if v.is_zero() => rep.probabilistic |= v.is_probabilistic(),
                _ => rep.passed = false,
            }
        }
        return Ok(rep);
    }
    let x = sys.x();
    let prep: Vec<_> = sol
        .fields
        .iter()
        .map(|f| {
            let (d, dd) = derivs(&f.closed, x);
            let terms: Vec<TermDerivs> = f
                .terms
                .iter()
                .map(|t| {
                    let (dp, ddp) = derivs(&t.prefactor, x);
                    let (da, dda) = derivs(&t.arg, x);
                    TermDerivs { spec: t.func.clone(), p: t.prefactor.clone(), dp, ddp, a: t.arg.clone(), da, dda }
                })
                .collect();
            ((f.closed.clone(), d, dd), terms)
        })
        .collect();
    let prec = bits_for_digits(digits);
    let mut max = Real::from_i64(0, prec);
    'points: for (k, b) in points.iter().enumerate() {
        let mut full = b.clone();
        for (a, (closed, terms)) in prep.iter().enumerate() {
            match field_jet(closed, terms, b, digits) {
                Ok((v, g, h)) => {
                    full.set_float(sys.u()[a].name(), v);
                    for i in 0..x.len() {
                        full.set_float(sys.jets.jet(a, &[i]).name(), g[i].clone());
                        for j in i..x.len() {
                            full.set_float(sys.jets.jet(a, &[i, j]).name(), h[i][j].clone());
                        }
                    }
                }
                Err(e) => {
                    rep.skipped.push(format!("point {k}: {e}"));
                    continue 'points;
                }
            }
        }
        let mut vals = Vec::new();
        for e in &eqs {
            match e.eval_float(&full, digits) {
                Ok(v) => vals.push(v.abs()),
                Err(e) => {
                    rep.skipped.push(format!("point {k}: {e}"));
                    continue 'points;
                }
            }
        }
        for (a, v) in vals.into_iter().enumerate() {
            rep.per_equation[a] = rep.per_equation[a].max(v.to_f64());
            max = max.max(&v);
        }
        rep.points_used += 1;
    }
    let m = max.to_f64();
    rep.max_residual = Some(m);
    rep.passed = rep.points_used > 0 && m < tol;
    Ok(rep)
}

/// `count` points with each named coordinate uniform on its range, on a
/// 1/1000 grid, on top of the fixed bindings.
pub fn sample_points(ranges: &[(&str, Q, Q)], fixed: &Bindings, count: usize, seed: u64) -> Vec<Bindings> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let mut b = fixed.clone();
            for (name, lo, hi) in ranges {
                let k: i64 = rng.gen_range(0..=1000);
                let t = Q::new(k.into(), 1000.into());
                b.set_exact(name, lo + (hi - lo) * t);
            }
            b
        })
        .collect()
}
