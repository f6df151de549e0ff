//! Killing, homothetic, conformal and affine collineations, and rank-2
//! Killing tensors, by finite ansatz and exact nullspace.
//!
//! Every unknown is a rational coefficient of one ansatz function in one
//! component. The determining equations are expanded, coefficients of
//! independent coordinate functions are matched, and the nullspace of the
//! resulting linear system is returned in reduced row echelon form.

mod ansatz;
pub mod matching;

use std::fmt;

use thiserror::Error;

pub use ansatz::AnsatzSpec;

use crate::expr::integrate::potential;
use crate::expr::{Expr, Symbol, ZeroTest};
use crate::geometry::{Metric, VField};
use crate::linalg::{nullspace, reduce, row_basis};
use matching::match_rows;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CollineationError {
    #[error("ansatz basis is empty")]
    EmptyAnsatz,
    #[error("ansatz basis is linearly dependent at {0}")]
    Dependent(String),
    #[error("ansatz coordinates do not match the metric")]
    Coordinates,
    #[error("returned element fails its defining equation: {0}")]
    Verification(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Kind {
    Kv,
    Hv,
    Ckv,
    Ac,
    Kt2,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Kv => "KV",
            Kind::Hv => "HV",
            Kind::Ckv => "CKV",
            Kind::Ac => "AC",
            Kind::Kt2 => "KT2",
        })
    }
}

/// Outcome of the gradient test.
#[derive(Clone, Debug, PartialEq)]
pub enum Gradient {
    Gradient(Expr),
    /// Closed, but no antiderivative in the expression grammar.
    PotentialUnavailable,
    NonGradient,
}

impl Gradient {
    pub fn is_gradient(&self) -> bool {
        !matches!(self, Gradient::NonGradient)
    }
}

#[derive(Clone, Debug)]
pub struct Collineation {
    pub field: VField,
    /// Conformal factor: `L_ξ g = 2ψ g`. Zero for affine collineations that
    /// are not conformal.
    pub psi: Expr,
    /// Homothety constant for homothetic vectors.
    pub homothety: Option<Expr>,
    pub gradient: Gradient,
    /// Coordinates in the unknown space (component-major).
    pub coefficients: Vec<Expr>,
}

/// Symmetric 2-tensor, lower indices.
#[derive(Clone, Debug, PartialEq)]
pub struct SymTensor {
    pub coords: Vec<Symbol>,
    pub comps: Vec<Vec<Expr>>,
}

#[derive(Clone, Debug)]
pub struct CollineationSet {
    pub kind: Kind,
    pub fields: Vec<Collineation>,
    pub tensors: Vec<SymTensor>,
    pub ansatz_size: usize,
    /// Theoretical maximum for this kind and dimension, when finite.
    pub known_max: Option<usize>,
    /// Dimension reached the known maximum, so the ansatz was sufficient.
    pub complete: bool,
    /// Two-dimensional conformal group: the result is a truncation.
    pub infinite_conformal: bool,
}

impl CollineationSet {
    pub fn dim(&self) -> usize {
        match self.kind {
            Kind::Kt2 => self.tensors.len(),
            _ => self.fields.len(),
        }
    }

    pub fn vector_fields(&self) -> Vec<VField> {
        self.fields.iter().map(|c| c.field.clone()).collect()
    }
}

pub fn known_max(kind: Kind, l: usize) -> Option<usize> {
    match kind {
        Kind::Ckv if l == 2 => None,
        Kind::Ckv => Some((l + 1) * (l + 2) / 2),
        Kind::Kv => Some(l * (l + 1) / 2),
        Kind::Hv => Some(1),
        Kind::Ac => Some(l * (l + 1)),
        Kind::Kt2 => Some(l * (l + 1) * (l + 1) * (l + 2) / 12),
    }
}

fn check_coords(m: &Metric, a: &AnsatzSpec) -> Result<(), CollineationError> {
    if m.coords() != a.coords() {
        return Err(CollineationError::Coordinates);
    }
    Ok(())
}

/// `ξ = Σ c_{a,k} f_k ∂_a` from a coefficient vector.
fn field_from(m: &Metric, a: &AnsatzSpec, c: &[Expr]) -> VField {
    let k = a.len();
    let comps = (0..m.dim())
        .map(|i| (0..k).filter(|&j| !c[i * k + j].is_zero()).map(|j| &c[i * k + j] * &a.basis()[j]).sum())
        .collect();
    VField::new(m.coords().to_vec(), comps)
}

fn unit_fields(m: &Metric, a: &AnsatzSpec) -> Vec<VField> {
    let mut out = Vec::new();
    for i in 0..m.dim() {
        for f in a.basis() {
            let mut v = VField::zero(m.coords());
            v.comps[i] = f.clone();
            out.push(v);
        }
    }
    out
}

fn linear_combination(vs: &[Vec<Expr>], d: &[Expr]) -> Vec<Expr> {
    let n = vs[0].len();
    (0..n)
        .map(|i| vs.iter().zip(d).filter(|(_, di)| !di.is_zero()).map(|(v, di)| &v[i] * di).sum())
        .collect()
}

/// Lower, test closedness, integrate.
pub fn classify_gradient(m: &Metric, v: &VField) -> Gradient {
    let low = m.lower(v);
    let x = m.coords();
    let zt = ZeroTest::default();
    for a in 0..x.len() {
        for b in a + 1..x.len() {
            let c = low[b].diff(&x[a]) - low[a].diff(&x[b]);
            if !zt.is_zero(&c) {
                return Gradient::NonGradient;
            }
        }
    }
    match potential(&low, x) {
        Some(p) if (0..x.len()).all(|i| zt.is_zero(&(p.diff(&x[i]) - &low[i]))) => Gradient::Gradient(p),
        _ => Gradient::PotentialUnavailable,
    }
}

fn ckv_residual(m: &Metric, v: &VField) -> (Vec<Vec<Expr>>, Expr) {
    let l = m.dim() as i64;
    let lg = m.lie_derivative_metric(v);
    let psi = v.divergence(m) / Expr::int(l);
    let g = m.components();
    let r = (0..m.dim())
        .map(|a| (0..m.dim()).map(|b| &lg[a][b] - &(&psi * &g[a][b]) * Expr::int(2)).collect())
        .collect();
    (r, psi)
}

fn make_set(kind: Kind, m: &Metric, a: &AnsatzSpec, fields: Vec<Collineation>) -> CollineationSet {
    let km = known_max(kind, m.dim());
    CollineationSet {
        kind,
        complete: km == Some(fields.len()),
        fields,
        tensors: Vec::new(),
        ansatz_size: a.len(),
        known_max: km,
        infinite_conformal: kind == Kind::Ckv && m.dim() == 2,
    }
}

fn collineation(m: &Metric, a: &AnsatzSpec, c: Vec<Expr>, homothety: Option<Expr>) -> Collineation {
    let field = field_from(m, a, &c);
    let psi = field.divergence(m) / Expr::int(m.dim() as i64);
    let gradient = classify_gradient(m, &field);
    Collineation { field, psi, homothety, gradient, coefficients: c }
}

/// Conformal Killing vectors within the ansatz.
pub fn solve_ckv(m: &Metric, a: &AnsatzSpec) -> Result<CollineationSet, CollineationError> {
    check_coords(m, a)?;
    let n = m.dim();
    let units = unit_fields(m, a);
    let res: Vec<Vec<Vec<Expr>>> = units.iter().map(|v| ckv_residual(m, v).0).collect();
    let mut conds = Vec::new();
    for i in 0..n {
        for j in i..n {
            conds.push(res.iter().map(|r| r[i][j].clone()).collect::<Vec<_>>());
        }
    }
    let rows = match_rows(&conds, m.coords());
    let ns = row_basis(&nullspace(&rows, units.len()), units.len());
    let zt = ZeroTest::default();
    let mut fields = Vec::new();
    for c in ns {
        let col = collineation(m, a, c, None);
        let (r, _) = ckv_residual(m, &col.field);
        if let Some(bad) = r.iter().flatten().find(|e| !zt.is_zero(e)) {
            return Err(CollineationError::Verification(bad.to_string()));
        }
        fields.push(col);
    }
    Ok(make_set(Kind::Ckv, m, a, fields))
}

/// Elements of a CKV set on which `cond(ψ)` vanishes identically, as a
/// reduced basis of coefficient vectors.
fn ckv_subspace(set: &CollineationSet, m: &Metric, cond: impl Fn(&Expr) -> Vec<Expr>) -> Vec<Vec<Expr>> {
    if set.fields.is_empty() {
        return Vec::new();
    }
    let per: Vec<Vec<Expr>> = set.fields.iter().map(|c| cond(&c.psi)).collect();
    let nc = per[0].len();
    let conds: Vec<Vec<Expr>> = (0..nc).map(|i| per.iter().map(|p| p[i].clone()).collect()).collect();
    let rows = match_rows(&conds, m.coords());
    let d = nullspace(&rows, set.fields.len());
    let coeffs: Vec<Vec<Expr>> = set.fields.iter().map(|c| c.coefficients.clone()).collect();
    let vs: Vec<Vec<Expr>> = d.iter().map(|di| linear_combination(&coeffs, di)).collect();
    let len = coeffs[0].len();
    row_basis(&vs, len)
}

/// Killing vectors: the CKVs with `ψ ≡ 0`.
pub fn solve_kv(m: &Metric, a: &AnsatzSpec) -> Result<CollineationSet, CollineationError> {
    let ckv = solve_ckv(m, a)?;
    Ok(kv_from_ckv(&ckv, m, a))
}

pub fn kv_from_ckv(ckv: &CollineationSet, m: &Metric, a: &AnsatzSpec) -> CollineationSet {
    let basis = ckv_subspace(ckv, m, |psi| vec![psi.clone()]);
    let fields = basis.into_iter().map(|c| collineation(m, a, c, Some(Expr::zero()))).collect();
    make_set(Kind::Kv, m, a, fields)
}

/// Proper homothetic vectors: constant `ψ ≠ 0`, reduced modulo the KVs and
/// normalized to `ψ = 1`.
pub fn solve_hv(m: &Metric, a: &AnsatzSpec) -> Result<CollineationSet, CollineationError> {
    let ckv = solve_ckv(m, a)?;
    Ok(hv_from_ckv(&ckv, m, a))
}

pub fn hv_from_ckv(ckv: &CollineationSet, m: &Metric, a: &AnsatzSpec) -> CollineationSet {
    let x = m.coords().to_vec();
    let kv = ckv_subspace(ckv, m, |psi| vec![psi.clone()]);
    let hv = ckv_subspace(ckv, m, |psi| x.iter().map(|s| psi.diff(s)).collect());
    let mut span = kv.clone();
    let mut fields = Vec::new();
    for v in hv {
        let r = reduce(&v, &span);
        if r.iter().all(|e| e.is_zero()) {
            continue;
        }
        let f = field_from(m, a, &r);
        let psi = f.divergence(m) / Expr::int(m.dim() as i64);
        let scaled: Vec<Expr> = r.iter().map(|e| e / &psi).collect();
        let len = scaled.len();
        span.push(scaled.clone());
        span = row_basis(&span, len);
        fields.push(collineation(m, a, scaled, Some(Expr::one())));
    }
    make_set(Kind::Hv, m, a, fields)
}

/// Affine collineations: `L_ξ Γ = 0`.
pub fn solve_affine(m: &Metric, a: &AnsatzSpec) -> Result<CollineationSet, CollineationError> {
    check_coords(m, a)?;
    let n = m.dim();
    let units = unit_fields(m, a);
    let res: Vec<Vec<Vec<Vec<Expr>>>> = units.iter().map(|v| m.lie_derivative_connection(v)).collect();
    let mut conds = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for k in j..n {
                conds.push(res.iter().map(|r| r[i][j][k].clone()).collect::<Vec<_>>());
            }
        }
    }
    let rows = match_rows(&conds, m.coords());
    let ns = row_basis(&nullspace(&rows, units.len()), units.len());
    let zt = ZeroTest::default();
    let mut fields = Vec::new();
    for c in ns {
        let col = collineation(m, a, c, None);
        let r = m.lie_derivative_connection(&col.field);
        if let Some(bad) = r.iter().flatten().flatten().find(|e| !zt.is_zero(e)) {
            return Err(CollineationError::Verification(bad.to_string()));
        }
        fields.push(col);
    }
    Ok(make_set(Kind::Ac, m, a, fields))
}

/// Cyclic sum `Λ_(AB;C)` for every `A ≤ B ≤ C`.
pub fn killing_tensor_residual(m: &Metric, t: &[Vec<Expr>]) -> Vec<Expr> {
    let n = m.dim();
    let x = m.coords();
    let gam = &m.christoffel().gamma;
    let cov = |a: usize, b: usize, c: usize| -> Expr {
        let mut s = vec![t[a][b].diff(&x[c])];
        for d in 0..n {
            if !gam[d][c][a].is_zero() && !t[d][b].is_zero() {
                s.push(-(&gam[d][c][a] * &t[d][b]));
            }
            if !gam[d][c][b].is_zero() && !t[a][d].is_zero() {
                s.push(-(&gam[d][c][b] * &t[a][d]));
            }
        }
        s.into_iter().sum()
    };
    let mut out = Vec::new();
    for a in 0..n {
        for b in a..n {
            for c in b..n {
                out.push(cov(a, b, c) + cov(b, c, a) + cov(c, a, b));
            }
        }
    }
    out
}

/// Rank-2 Killing tensors within the ansatz.
pub fn solve_killing_tensor2(m: &Metric, a: &AnsatzSpec) -> Result<CollineationSet, CollineationError> {
    check_coords(m, a)?;
    let n = m.dim();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
    let k = a.len();
    let tensor = |c: &dyn Fn(usize, usize) -> Expr| -> Vec<Vec<Expr>> {
        let mut t = vec![vec![Expr::zero(); n]; n];
        for (p, &(i, j)) in pairs.iter().enumerate() {
            let v: Expr = (0..k).map(|q| c(p, q) * &a.basis()[q]).sum();
            t[i][j] = v.clone();
            t[j][i] = v;
        }
        t
    };
    let nunk = pairs.len() * k;
    let res: Vec<Vec<Expr>> = (0..nunk)
        .map(|u| {
            let t = tensor(&|p, q| if p * k + q == u { Expr::one() } else { Expr::zero() });
            killing_tensor_residual(m, &t)
        })
        .collect();
    let nc = res[0].len();
    let conds: Vec<Vec<Expr>> = (0..nc).map(|i| res.iter().map(|r| r[i].clone()).collect()).collect();
    let rows = match_rows(&conds, m.coords());
    let ns = row_basis(&nullspace(&rows, nunk), nunk);
    let zt = ZeroTest::default();
    let mut tensors = Vec::new();
    for c in ns {
        let t = tensor(&|p, q| c[p * k + q].clone());
        if let Some(bad) = killing_tensor_residual(m, &t).iter().find(|e| !zt.is_zero(e)) {
            return Err(CollineationError::Verification(bad.to_string()));
        }
        tensors.push(SymTensor { coords: m.coords().to_vec(), comps: t });
    }
    let mut set = make_set(Kind::Kt2, m, a, Vec::new());
    set.complete = set.known_max == Some(tensors.len());
    set.tensors = tensors;
    Ok(set)
}

/// Is `v` conformal Killing, returning ψ when it is.
pub fn conformal_factor(m: &Metric, v: &VField) -> Option<Expr> {
    let (r, psi) = ckv_residual(m, v);
    let zt = ZeroTest::default();
    r.iter().flatten().all(|e| zt.is_zero(e)).then_some(psi)
}

#[cfg(test)]
mod tests;
