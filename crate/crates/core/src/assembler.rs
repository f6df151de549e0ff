//! Symmetry algebras from collineation data.
//!
//! Candidates are built from the CKVs of `g` (paired with `(2-n)/2 ψ Y` when
//! `H` has a proper gradient HV `Y`) and the collineations of `H`. Every
//! candidate leaves a Lie remainder that is linear in the candidate, so the
//! admissible combinations are a nullspace after coefficient matching in
//! `(x, u)` and the jets. Noether symmetries are cut out of that space by
//! the linear pieces of the Noether condition. Every emitted generator is
//! checked again on its own.

use std::fmt::Write as _;

use thiserror::Error;

use crate::collineations::matching::{coefficients, match_rows};
use crate::collineations::{
    classify_gradient, hv_from_ckv, kv_from_ckv, solve_affine, solve_ckv, AnsatzSpec, CollineationError, CollineationSet, Gradient,
    Kind,
};
use crate::expr::integrate::potential;
use crate::expr::{Expr, Symbol};
use crate::geometry::VField;
use crate::linalg::{nullspace, row_basis};
use crate::symmetry::{
    apply_prolonged, check_lie_condition, check_noether_condition, check_on_shell_divergence, conservation_current,
    noether_lhs, prolong, Current, Generator, QuasilinearSystem, SymmetryError,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AssemblerError {
    #[error("collineation set has kind {got}, expected {expected}")]
    WrongKind { expected: Kind, got: Kind },
    #[error("dimension out of range: {0}")]
    OutOfRange(String),
    #[error("generator {0} failed re-verification")]
    Verification(String),
    #[error(transparent)]
    Symmetry(#[from] SymmetryError),
    #[error(transparent)]
    Collineation(#[from] CollineationError),
}

/// Which case of the classification applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branch {
    /// `n > 2` and `H` has a proper gradient HV.
    A,
    /// `n > 2`, no proper gradient HV.
    B,
    /// `n = 2`.
    C,
}

impl std::fmt::Display for Branch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Branch::A => "a",
            Branch::B => "b",
            Branch::C => "c",
        })
    }
}

#[derive(Clone, Debug)]
pub struct LabelledGenerator {
    pub generator: Generator,
    /// Which collineations it is built from.
    pub provenance: String,
    pub gauge: Option<Vec<Expr>>,
    pub current: Option<Current>,
    pub probabilistic: bool,
}

/// The generators `b^A(x) ∂_A` with `b` solving the system itself.
#[derive(Clone, Debug)]
pub struct FamilyEntry {
    pub generator: Generator,
    /// The system written for `b`.
    pub pde: Vec<Expr>,
    /// Counted as one basis entry (no constant solution in the finite part).
    pub counted: bool,
    pub lie: bool,
    pub noether: bool,
    pub gauge: Option<Vec<Expr>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CaseKind {
    LaplaceFlat,
    SigmaModel,
    Gup,
}

impl std::str::FromStr for CaseKind {
    type Err = AssemblerError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "laplace-flat" => Ok(CaseKind::LaplaceFlat),
            "sigma-model" => Ok(CaseKind::SigmaModel),
            "gup" => Ok(CaseKind::Gup),
            _ => Err(AssemblerError::OutOfRange(format!("unknown case {s}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bounds {
    pub lie_upper: usize,
    pub noether_upper: Option<usize>,
    pub lower: Option<usize>,
}

pub fn dimension_bounds(n: usize, m: usize, case: CaseKind) -> Result<Bounds, AssemblerError> {
    match case {
        CaseKind::LaplaceFlat | CaseKind::SigmaModel if n <= 2 => Err(AssemblerError::OutOfRange(format!("n = {n}, need n > 2"))),
        CaseKind::Gup if n < 2 => Err(AssemblerError::OutOfRange(format!("n = {n}, need n >= 2"))),
        CaseKind::LaplaceFlat => {
            let c = (n + 2) * (n + 1) / 2;
            Ok(Bounds { lie_upper: c + m * (m + 1), noether_upper: Some(c + m * (m + 1) / 2), lower: None })
        }
        CaseKind::SigmaModel => {
            let b = n * (n + 1) / 2 + m * (m - 1) / 2;
            Ok(Bounds { lie_upper: b, noether_upper: Some(b), lower: None })
        }
        CaseKind::Gup => Ok(Bounds { lie_upper: n * (n + 1) / 2 + 3, noether_upper: None, lower: Some(3) }),
    }
}

#[derive(Clone, Debug)]
pub struct SymmetryReport {
    pub system: String,
    pub branch: Branch,
    pub proper_hv: Option<VField>,
    pub lie: Vec<LabelledGenerator>,
    pub noether: Vec<LabelledGenerator>,
    pub family: Option<FamilyEntry>,
    pub killing_tensors: Option<usize>,
    pub transcript: Vec<String>,
}

impl SymmetryReport {
    fn family_counts(&self, noether: bool) -> usize {
        match &self.family {
            Some(f) if f.counted && (if noether { f.noether } else { f.lie }) => 1,
            _ => 0,
        }
    }

    pub fn lie_count(&self) -> usize {
        self.lie.len() + self.family_counts(false)
    }

    pub fn noether_count(&self) -> usize {
        self.noether.len() + self.family_counts(true)
    }
}

fn check_kind(set: &CollineationSet, k: Kind) -> Result<(), AssemblerError> {
    if set.kind != k {
        return Err(AssemblerError::WrongKind { expected: k, got: set.kind });
    }
    Ok(())
}

/// A proper gradient HV of `H` inside the span of `ac` with `L_Y H = 2H`.
pub fn proper_gradient_hv(sys: &QuasilinearSystem, ac: &[VField]) -> Option<VField> {
    let h = &sys.h;
    let u = sys.u();
    let k = ac.len();
    if k == 0 {
        return None;
    }
    // unknowns: t, b_1..b_k ; Σ b_q L_{Z_q} H - 2 t H = 0 and d(Σ b_q Z_q♭) = 0
    let lies: Vec<Vec<Vec<Expr>>> = ac.iter().map(|z| h.lie_derivative_metric(z)).collect();
    let lows: Vec<Vec<Expr>> = ac.iter().map(|z| h.lower(z)).collect();
    let m = sys.m();
    let mut conds = Vec::new();
    for a in 0..m {
        for b in a..m {
            let mut row = vec![-(&h.components()[a][b] * Expr::int(2))];
            row.extend(lies.iter().map(|l| l[a][b].clone()));
            conds.push(row);
            if b > a {
                let mut row = vec![Expr::zero()];
                row.extend(lows.iter().map(|w| w[b].diff(&u[a]) - w[a].diff(&u[b])));
                conds.push(row);
            }
        }
    }
    let rows = match_rows(&conds, u);
    let ns = row_basis(&nullspace(&rows, k + 1), k + 1);
    let v = ns.into_iter().find(|v| !v[0].is_zero())?;
    let t = v[0].clone();
    let mut y = VField::zero(u);
    for (q, z) in ac.iter().enumerate() {
        if !v[q + 1].is_zero() {
            y = y.add(&z.scale(&(&v[q + 1] / &t)));
        }
    }
    matches!(classify_gradient(h, &y), Gradient::Gradient(_)).then_some(y)
}

struct Candidate {
    gen: Generator,
    label: String,
}

fn label_of(c: &[Expr], cands: &[Candidate]) -> String {
    let mut s = String::new();
    for (ci, cand) in c.iter().zip(cands) {
        if ci.is_zero() {
            continue;
        }
        if !s.is_empty() {
            s.push_str(" + ");
        }
        if ci.is_one() {
            s.push_str(&cand.label);
        } else {
            let _ = write!(s, "({})*{}", ci, cand.label);
        }
    }
    s
}

fn combine(c: &[Expr], cands: &[Candidate], n: usize, m: usize) -> Generator {
    let mut g = Generator::zero(n, m);
    for (ci, cand) in c.iter().zip(cands) {
        if !ci.is_zero() {
            g = g.add(&cand.gen.scale(ci));
        }
    }
    g.label = label_of(c, cands);
    g
}

fn all_vars(sys: &QuasilinearSystem) -> Vec<Symbol> {
    let mut v: Vec<Symbol> = sys.x().to_vec();
    v.extend(sys.u().iter().cloned());
    v.extend(sys.jets.first_jets());
    v.extend(sys.jets.second_jets());
    v
}

/// `X^[2]P^A - κ^A_D P^D` with `κ` read off the trace, per equation.
fn lie_remainder(sys: &QuasilinearSystem, x: &Generator) -> Vec<Expr> {
    let pr = prolong(x, sys);
    let eqs = sys.equations();
    let p = sys.trace_index();
    let gpp = sys.g.inverse_components()[p][p].clone();
    (0..sys.m())
        .map(|a| {
            let e = apply_prolonged(x, &pr, sys, &eqs[a]);
            let mut r = e.clone();
            for d in 0..sys.m() {
                let k = e.diff(&sys.jets.jet(d, &[p, p])) / &gpp;
                if !k.is_zero() {
                    r = r - k * &eqs[d];
                }
            }
            r
        })
        .collect()
}

fn lie_subspace(sys: &QuasilinearSystem, cands: &[Candidate]) -> Vec<Vec<Expr>> {
    let k = cands.len();
    if k == 0 {
        return Vec::new();
    }
    let rems: Vec<Vec<Expr>> = cands.iter().map(|c| lie_remainder(sys, &c.gen)).collect();
    let conds: Vec<Vec<Expr>> = (0..sys.m()).map(|a| rems.iter().map(|r| r[a].clone()).collect()).collect();
    let rows = match_rows(&conds, &all_vars(sys));
    row_basis(&nullspace(&rows, k), k)
}

/// Combinations `d` of `gens` satisfying the linear parts of the Noether
/// condition: no jet-quadratic terms, closed gauge gradient, `u`-free remainder.
fn noether_subspace(sys: &QuasilinearSystem, gens: &[Generator]) -> Result<Vec<Vec<Expr>>, SymmetryError> {
    let (n, m) = (sys.n(), sys.m());
    let u = sys.u();
    let jets = sys.jets.first_jets();
    let mut xu: Vec<Symbol> = sys.x().to_vec();
    xu.extend(u.iter().cloned());
    let mut xuj = xu.clone();
    xuj.extend(jets.iter().cloned());

    struct Parts {
        high: Expr,
        grad: Vec<Vec<Expr>>,
        r0: Expr,
    }
    let mut parts = Vec::new();
    for g in gens {
        let lhs = noether_lhs(sys, g)?;
        let mut p = Parts { high: Expr::zero(), grad: vec![vec![Expr::zero(); m]; n], r0: Expr::zero() };
        for (key, deg, c) in coefficients(&lhs, &jets).expect("polynomial in first jets") {
            match deg {
                0 => p.r0 = c,
                1 => {
                    let (a, idx) = sys.jets.lookup(&key.symbols()[0]).expect("first jet");
                    p.grad[idx[0]][a] = c;
                }
                _ => p.high = p.high + key * c,
            }
        }
        parts.push(p);
    }
    let k = gens.len();
    let ident: Vec<Vec<Expr>> = (0..k).map(|i| (0..k).map(|j| if i == j { Expr::one() } else { Expr::zero() }).collect()).collect();
    let compose = |basis: &[Vec<Expr>], d: &[Vec<Expr>]| -> Vec<Vec<Expr>> {
        d.iter()
            .map(|di| (0..k).map(|col| basis.iter().zip(di).filter(|(_, x)| !x.is_zero()).map(|(b, x)| &b[col] * x).sum()).collect())
            .collect()
    };
    let lin = |v: &[Expr], f: &dyn Fn(&Parts) -> Expr| -> Expr {
        v.iter().zip(&parts).filter(|(c, _)| !c.is_zero()).map(|(c, p)| c * &f(p)).sum()
    };
    // jet-quadratic part
    let conds = vec![parts.iter().map(|p| p.high.clone()).collect::<Vec<_>>()];
    let s1 = compose(&ident, &row_basis(&nullspace(&match_rows(&conds, &xuj), k), k));
    if s1.is_empty() {
        return Ok(s1);
    }
    // closedness of the gauge gradient in u
    let mut conds = Vec::new();
    for i in 0..n {
        for b in 0..m {
            for c in b + 1..m {
                conds.push(
                    s1.iter().map(|v| lin(v, &|p: &Parts| p.grad[i][b].diff(&u[c]) - p.grad[i][c].diff(&u[b]))).collect::<Vec<_>>(),
                );
            }
        }
    }
    let s2 = if conds.is_empty() { s1 } else { compose(&s1, &nullspace(&match_rows(&conds, &xu), s1.len())) };
    if s2.is_empty() {
        return Ok(s2);
    }
    // u-independence of the jet-free remainder
    let aux = sys.aux_on_shell();
    let mut rems = Vec::new();
    for v in &s2 {
        let r0 = lin(v, &|p: &Parts| p.r0.clone());
        let mut r = r0;
        for i in 0..n {
            let gi: Vec<Expr> = (0..m).map(|b| lin(v, &|p: &Parts| p.grad[i][b].clone())).collect();
            let a = potential(&gi, u).unwrap_or_else(Expr::zero);
            r = r - sys.jets.partial_x(&a, i);
        }
        if !aux.is_empty() {
            r = r.subs(&aux);
        }
        rems.push(r);
    }
    let conds: Vec<Vec<Expr>> = u.iter().map(|s| rems.iter().map(|r| r.diff(s)).collect()).collect();
    let s3 = compose(&s2, &nullspace(&match_rows(&conds, &xu), s2.len()));
    Ok(row_basis(&s3, k))
}

fn is_linear_homogeneous(sys: &QuasilinearSystem) -> bool {
    let u = sys.u();
    if sys.connection().gamma.iter().flatten().flatten().any(|e| !e.is_zero()) {
        return false;
    }
    let zero_at_origin = {
        let mut sub = crate::expr::Substitution::new();
        for s in u {
            sub.insert(s.clone(), Expr::zero());
        }
        sys.f.iter().all(|f| f.subs(&sub).is_zero())
    };
    zero_at_origin && sys.f.iter().all(|f| u.iter().all(|a| u.iter().all(|b| f.diff(a).diff(b).is_zero())))
}

fn family(sys: &QuasilinearSystem, finite: &[LabelledGenerator], transcript: &mut Vec<String>) -> Result<Option<FamilyEntry>, SymmetryError> {
    if !is_linear_homogeneous(sys) {
        transcript.push("system is not linear homogeneous in u: no solution-addition family".into());
        return Ok(None);
    }
    let aux = sys.clone().with_aux("b");
    let b: Vec<Expr> = aux.jets.aux().iter().map(|s| s.expr()).collect();
    let m = sys.m();
    let target: Vec<usize> = (m..2 * m).collect();
    let pde: Vec<Expr> = aux.equations().iter().map(|e| aux.jets.relabel(e, &target)).collect();
    let gen = Generator::new(vec![Expr::zero(); sys.n()], b, "b^A(x) d_A")?;
    let lie = check_lie_condition(&aux, &gen).verdict;
    let (noether, gauge) = if sys.v.is_some() {
        let r = check_noether_condition(&aux, &gen)?;
        (r.is_noether(), r.gauge)
    } else {
        (false, None)
    };
    let constant = finite.iter().any(|g| {
        g.generator.xi.iter().all(|e| e.is_zero())
            && g.generator.eta.iter().any(|e| !e.is_zero())
            && g.generator.eta.iter().all(|e| e.as_rational().is_some() || !e.depends_on_any(&all_xu(sys)))
    });
    transcript.push(format!(
        "family b^A(x) d_A: lie={lie} noether={noether} counted={} (constant translation in finite basis: {constant})",
        !constant
    ));
    Ok(Some(FamilyEntry { generator: gen, pde, counted: !constant, lie, noether, gauge }))
}

fn all_xu(sys: &QuasilinearSystem) -> Vec<Symbol> {
    let mut v = sys.x().to_vec();
    v.extend(sys.u().iter().cloned());
    v
}

fn branch_and_y(sys: &QuasilinearSystem, h_fields: &[VField], transcript: &mut Vec<String>) -> (Branch, Option<VField>) {
    if sys.n() == 2 {
        transcript.push("n = 2: branch c".into());
        return (Branch::C, None);
    }
    match proper_gradient_hv(sys, h_fields) {
        Some(y) => {
            transcript.push(format!("proper gradient HV of H: Y = {:?}", y.comps.iter().map(|e| e.to_string()).collect::<Vec<_>>()));
            (Branch::A, Some(y))
        }
        None => {
            transcript.push("no proper gradient HV of H: branch b".into());
            (Branch::B, None)
        }
    }
}

fn base_candidates(sys: &QuasilinearSystem, ckv_g: &CollineationSet, y: Option<&VField>) -> Vec<Candidate> {
    let n = sys.n() as i64;
    let m = sys.m();
    ckv_g
        .fields
        .iter()
        .enumerate()
        .map(|(p, c)| {
            let mut eta = vec![Expr::zero(); m];
            let mut label = format!("ckv{p}");
            if let Some(y) = y {
                if !c.psi.is_zero() {
                    let w = &c.psi * Expr::frac(2 - n, 2);
                    eta = y.comps.iter().map(|yc| &w * yc).collect();
                    label = format!("(ckv{p} + (2-n)/2 psi Y)");
                }
            }
            Candidate { gen: Generator::new(c.field.comps.clone(), eta, &label).expect("x-only"), label }
        })
        .collect()
}

fn field_candidates(sys: &QuasilinearSystem, set: &CollineationSet, tag: &str) -> Vec<Candidate> {
    set.fields
        .iter()
        .enumerate()
        .map(|(q, c)| {
            let label = format!("{tag}{q}");
            Candidate { gen: Generator::new(vec![Expr::zero(); sys.n()], c.field.comps.clone(), &label).expect("x-free"), label }
        })
        .collect()
}

fn describe(sys: &QuasilinearSystem) -> String {
    format!("n={} m={} x={:?} u={:?}", sys.n(), sys.m(), sys.x().iter().map(|s| s.name()).collect::<Vec<_>>(), sys.u().iter().map(|s| s.name()).collect::<Vec<_>>())
}

/// Lie point symmetries from the CKVs of `g` and the ACs of `H`.
pub fn assemble_lie(
    sys: &QuasilinearSystem,
    ckv_g: &CollineationSet,
    ac_h: &CollineationSet,
    kt2_h: Option<&CollineationSet>,
) -> Result<SymmetryReport, AssemblerError> {
    check_kind(ckv_g, Kind::Ckv)?;
    check_kind(ac_h, Kind::Ac)?;
    if let Some(k) = kt2_h {
        check_kind(k, Kind::Kt2)?;
    }
    let mut transcript = vec![format!("system {}", describe(sys))];
    let (branch, y) = branch_and_y(sys, &ac_h.vector_fields(), &mut transcript);
    let mut cands = base_candidates(sys, ckv_g, y.as_ref());
    cands.extend(field_candidates(sys, ac_h, "ac"));
    transcript.push(format!("{} candidates ({} from g, {} from H)", cands.len(), ckv_g.fields.len(), ac_h.fields.len()));
    let ns = lie_subspace(sys, &cands);
    let mut lie = Vec::new();
    for c in &ns {
        let g = combine(c, &cands, sys.n(), sys.m());
        let r = check_lie_condition(sys, &g);
        transcript.push(format!("lie {}: verdict={} probabilistic={}", g.label, r.verdict, r.probabilistic));
        if !r.verdict {
            return Err(AssemblerError::Verification(g.label));
        }
        lie.push(LabelledGenerator { provenance: g.label.clone(), generator: g, gauge: None, current: None, probabilistic: r.probabilistic });
    }
    let family = family(sys, &lie, &mut transcript)?;
    Ok(SymmetryReport {
        system: describe(sys),
        branch,
        proper_hv: y,
        lie,
        noether: Vec::new(),
        family,
        killing_tensors: kt2_h.map(|k| k.dim()),
        transcript,
    })
}

/// Noether point symmetries from the CKVs of `g` and the KVs (and, outside
/// branch b, HVs) of `H`; gauges and currents included.
pub fn assemble_noether(
    sys: &QuasilinearSystem,
    ckv_g: &CollineationSet,
    kv_h: &CollineationSet,
    hv_h: Option<&CollineationSet>,
) -> Result<SymmetryReport, AssemblerError> {
    check_kind(ckv_g, Kind::Ckv)?;
    check_kind(kv_h, Kind::Kv)?;
    if let Some(h) = hv_h {
        check_kind(h, Kind::Hv)?;
    }
    let mut transcript = vec![format!("system {}", describe(sys))];
    let mut h_fields = kv_h.vector_fields();
    if let Some(h) = hv_h {
        h_fields.extend(h.vector_fields());
    }
    let (branch, y) = branch_and_y(sys, &h_fields, &mut transcript);
    let mut cands = base_candidates(sys, ckv_g, y.as_ref());
    cands.extend(field_candidates(sys, kv_h, "kv"));
    if let (Some(h), true) = (hv_h, branch != Branch::B) {
        cands.extend(field_candidates(sys, h, "hv"));
    }
    transcript.push(format!("{} candidates", cands.len()));
    let lie_ns = lie_subspace(sys, &cands);
    let gens: Vec<Generator> = lie_ns.iter().map(|c| combine(c, &cands, sys.n(), sys.m())).collect();
    let noe = noether_subspace(sys, &gens)?;
    let mut out = Vec::new();
    let mut lie_list = Vec::new();
    for g in &gens {
        lie_list.push(LabelledGenerator { provenance: g.label.clone(), generator: g.clone(), gauge: None, current: None, probabilistic: false });
    }
    for d in &noe {
        // back to candidate coordinates
        let c: Vec<Expr> = (0..cands.len())
            .map(|col| lie_ns.iter().zip(d).filter(|(_, x)| !x.is_zero()).map(|(b, x)| &b[col] * x).sum())
            .collect();
        let g = combine(&c, &cands, sys.n(), sys.m());
        let lr = check_lie_condition(sys, &g);
        let nr = check_noether_condition(sys, &g)?;
        let gauge = nr.gauge.clone();
        let current = match &gauge {
            Some(a) => Some(conservation_current(sys, &g, a)?),
            None => None,
        };
        let div = current.as_ref().map(|c| check_on_shell_divergence(sys, c)).unwrap_or(false);
        transcript.push(format!("noether {}: lie={} noether={:?} on-shell divergence zero={}", g.label, lr.verdict, nr.verdict, div));
        if !lr.verdict || !nr.is_noether() || !div {
            return Err(AssemblerError::Verification(g.label));
        }
        out.push(LabelledGenerator { provenance: g.label.clone(), generator: g, gauge, current, probabilistic: lr.probabilistic || nr.probabilistic });
    }
    let family = family(sys, &lie_list, &mut transcript)?;
    if let Some(f) = &family {
        if f.noether {
            if let Some(a) = &f.gauge {
                let aux = sys.clone().with_aux("b");
                let c = conservation_current(&aux, &f.generator, a)?;
                transcript.push(format!("family current on-shell divergence zero={}", check_on_shell_divergence(&aux, &c)));
            }
        }
    }
    Ok(SymmetryReport { system: describe(sys), branch, proper_hv: y, lie: lie_list, noether: out, family, killing_tensors: None, transcript })
}

/// Both algebras with the default ansatz for each metric.
pub fn analyse(sys: &QuasilinearSystem, noether: bool) -> Result<SymmetryReport, AssemblerError> {
    let ag = AnsatzSpec::default_for(&sys.g)?;
    let ah = AnsatzSpec::default_for(&sys.h)?;
    analyse_with(sys, &ag, &ah, noether)
}

/// Both algebras with the given ansätze for `g` and `H`.
pub fn analyse_with(sys: &QuasilinearSystem, ag: &AnsatzSpec, ah: &AnsatzSpec, noether: bool) -> Result<SymmetryReport, AssemblerError> {
    let ckv = solve_ckv(&sys.g, ag)?;
    let ac = solve_affine(&sys.h, ah)?;
    let mut rep = assemble_lie(sys, &ckv, &ac, None)?;
    if noether && sys.v.is_some() {
        let ckv_h = solve_ckv(&sys.h, ah)?;
        let kv = kv_from_ckv(&ckv_h, &sys.h, ah);
        let hv = hv_from_ckv(&ckv_h, &sys.h, ah);
        let nr = assemble_noether(sys, &ckv, &kv, Some(&hv))?;
        rep.noether = nr.noether;
        rep.transcript.extend(nr.transcript.into_iter().skip(1));
        if let (Some(f), Some(nf)) = (rep.family.as_mut(), nr.family) {
            f.noether = nf.noether;
            f.gauge = nf.gauge;
        }
    }
    Ok(rep)
}
