#![allow(dead_code)]

use collineate::collineations::matching::match_rows;
use collineate::expr::{bits_for_digits, Bindings, Expr, Real, Symbol};
use collineate::geometry::VField;
use collineate::linalg::rank;
use proptest::prelude::*;

/// Small expression tree over `x`, `y` that always builds to something
/// finite on the positive quadrant.
#[derive(Clone, Debug)]
pub enum Ast {
    X,
    Y,
    Num(i64, i64),
    Add(Box<Ast>, Box<Ast>),
    Sub(Box<Ast>, Box<Ast>),
    Mul(Box<Ast>, Box<Ast>),
    /// `a / (2 + b²)`
    Div(Box<Ast>, Box<Ast>),
    Pow(Box<Ast>, u8),
    Exp(Box<Ast>),
    Sin(Box<Ast>),
    Cos(Box<Ast>),
    Sinh(Box<Ast>),
    Cosh(Box<Ast>),
    /// `ln(1 + a²)`
    Ln(Box<Ast>),
    /// `sqrt(1 + a²)`
    Sqrt(Box<Ast>),
}

pub fn x() -> Symbol {
    Symbol::param("x")
}

pub fn y() -> Symbol {
    Symbol::param("y")
}

impl Ast {
    pub fn build(&self) -> Expr {
        let one = Expr::one();
        let sq = |a: &Ast| {
            let e = a.build();
            &e * &e
        };
        match self {
            Ast::X => x().expr(),
            Ast::Y => y().expr(),
            Ast::Num(n, d) => Expr::frac(*n, *d),
            Ast::Add(a, b) => a.build() + b.build(),
            Ast::Sub(a, b) => a.build() - b.build(),
            Ast::Mul(a, b) => a.build() * b.build(),
            Ast::Div(a, b) => a.build() / (Expr::int(2) + sq(b)),
            Ast::Pow(a, k) => a.build().powi(*k as i64),
            Ast::Exp(a) => a.build().exp(),
            Ast::Sin(a) => a.build().sin(),
            Ast::Cos(a) => a.build().cos(),
            Ast::Sinh(a) => a.build().sinh(),
            Ast::Cosh(a) => a.build().cosh(),
            Ast::Ln(a) => (one + sq(a)).ln(),
            Ast::Sqrt(a) => (one + sq(a)).sqrt(),
        }
    }
}

pub fn ast() -> impl Strategy<Value = Ast> {
    let leaf = prop_oneof![
        Just(Ast::X),
        Just(Ast::Y),
        (-5i64..=5, 1i64..=4).prop_map(|(n, d)| Ast::Num(n, d)),
    ];
    leaf.prop_recursive(3, 12, 2, |inner| {
        let b = |a: Ast| Box::new(a);
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(move |(p, q)| Ast::Add(b(p), b(q))),
            (inner.clone(), inner.clone()).prop_map(move |(p, q)| Ast::Sub(b(p), b(q))),
            (inner.clone(), inner.clone()).prop_map(move |(p, q)| Ast::Mul(b(p), b(q))),
            (inner.clone(), inner.clone()).prop_map(move |(p, q)| Ast::Div(b(p), b(q))),
            (inner.clone(), 2u8..=3).prop_map(move |(p, k)| Ast::Pow(b(p), k)),
            inner.clone().prop_map(move |p| Ast::Exp(b(p))),
            inner.clone().prop_map(move |p| Ast::Sin(b(p))),
            inner.clone().prop_map(move |p| Ast::Cos(b(p))),
            inner.clone().prop_map(move |p| Ast::Sinh(b(p))),
            inner.clone().prop_map(move |p| Ast::Cosh(b(p))),
            inner.clone().prop_map(move |p| Ast::Ln(b(p))),
            inner.prop_map(move |p| Ast::Sqrt(b(p))),
        ]
    })
}

/// Expressions that vanish identically but not structurally.
pub fn hidden_zero(a: &Ast) -> Expr {
    let e = a.build();
    let one = Expr::one();
    let s = e.sin();
    let c = e.cos();
    let sh = e.sinh();
    let ch = e.cosh();
    &s * &s + &c * &c - &one + (&ch * &ch - &sh * &sh - &one) * x().expr()
}

/// A nonzero perturbation, `k/997` times a leaf.
pub fn nudge() -> impl Strategy<Value = Expr> {
    (prop_oneof![-9i64..=-1, 1i64..=9], 0usize..3).prop_map(|(k, w)| {
        let leaf = [Expr::one(), x().expr(), y().expr()][w].clone();
        Expr::frac(k, 997) * leaf
    })
}

/// `v` lies in the span of `basis` with constant coefficients.
pub fn in_span(basis: &[VField], v: &VField) -> bool {
    let vars = v.coords.clone();
    let k = basis.len();
    let conds: Vec<Vec<Expr>> = (0..v.dim())
        .map(|i| basis.iter().map(|b| b.comps[i].clone()).chain(std::iter::once(v.comps[i].clone())).collect())
        .collect();
    let rows = match_rows(&conds, &vars);
    let without: Vec<Vec<Expr>> = rows.iter().map(|r| r[..k].to_vec()).collect();
    rank(&rows, k + 1) == rank(&without, k)
}

pub fn vf(coords: &[Symbol], comps: &[Expr]) -> VField {
    VField::new(coords.to_vec(), comps.to_vec())
}

const FD_DIGITS: u32 = 40;

fn at(px: &Real, py: &Real) -> Bindings {
    Bindings::new().with_float("x", px.clone()).with_float("y", py.clone())
}

/// Relative gap between `d/dx` and a central difference at one point;
/// `None` when the point is outside the domain.
pub fn fd_gap(e: &Expr, px: f64, py: f64) -> Option<f64> {
    let p = bits_for_digits(FD_DIGITS);
    let (rx, ry) = (Real::from_f64(px, p), Real::from_f64(py, p));
    let h = Real::parse("1e-12", p);
    let d = e.diff(&x()).eval_float(&at(&rx, &ry), FD_DIGITS).ok()?;
    let f1 = e.eval_float(&at(&(&rx + &h), &ry), FD_DIGITS).ok()?;
    let f0 = e.eval_float(&at(&(&rx - &h), &ry), FD_DIGITS).ok()?;
    let fd = (f1 - f0) / (&h + &h);
    if !d.is_finite() || !fd.is_finite() {
        return None;
    }
    let scale = d.abs().to_f64().max(1.0);
    Some((d - fd).abs().to_f64() / scale)
}
