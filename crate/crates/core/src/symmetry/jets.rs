//! Jet coordinates `u^A_{,i1...ik}` as symbols, created on demand.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use crate::expr::{Expr, Substitution, Symbol, SymbolClass};

#[derive(Debug, Default)]
struct Registry {
    by_symbol: HashMap<Symbol, (usize, Vec<usize>)>,
    by_index: HashMap<(usize, Vec<usize>), Symbol>,
}

/// Independent variables, dependent fields and auxiliary fields `b^A(x)`.
///
/// Jets of every order are symbols of class [`SymbolClass::Jet`] with a
/// sorted multi-index, so mixed partials commute by construction.
#[derive(Clone, Debug)]
pub struct JetSpace {
    x: Vec<Symbol>,
    fields: Vec<Symbol>,
    /// Number of genuine dependent variables; the rest are auxiliary.
    m: usize,
    reg: Arc<RwLock<Registry>>,
}

impl JetSpace {
    pub fn new(x: Vec<Symbol>, u: Vec<Symbol>) -> JetSpace {
        let m = u.len();
        let js = JetSpace { x, fields: u, m, reg: Arc::default() };
        for (k, f) in js.fields.iter().enumerate() {
            js.register(f.clone(), k, Vec::new());
        }
        js
    }

    /// Add auxiliary functions of `x` only, named `b1, b2, ...` after `prefix`.
    pub fn with_aux(mut self, prefix: &str, count: usize) -> JetSpace {
        for a in 1..=count {
            let s = Symbol::new(&format!("{prefix}{a}"), SymbolClass::Jet);
            let k = self.fields.len();
            self.fields.push(s.clone());
            self.register(s, k, Vec::new());
        }
        self
    }

    fn register(&self, s: Symbol, field: usize, idx: Vec<usize>) {
        let mut r = self.reg.write().unwrap();
        r.by_index.insert((field, idx.clone()), s.clone());
        r.by_symbol.insert(s, (field, idx));
    }

    pub fn x(&self) -> &[Symbol] {
        &self.x
    }

    pub fn u(&self) -> &[Symbol] {
        &self.fields[..self.m]
    }

    pub fn aux(&self) -> &[Symbol] {
        &self.fields[self.m..]
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    fn name(&self, field: usize, idx: &[usize]) -> String {
        let short = self.x.iter().all(|s| s.name().chars().count() == 1);
        let parts: Vec<&str> = idx.iter().map(|&i| self.x[i].name()).collect();
        let sep = if short { "" } else { "_" };
        format!("{}_{}", self.fields[field].name(), parts.join(sep))
    }

    /// The jet symbol of `field` (0-based, auxiliary fields after the
    /// dependent ones) for the multi-index `idx`.
    pub fn jet(&self, field: usize, idx: &[usize]) -> Symbol {
        let mut idx = idx.to_vec();
        idx.sort_unstable();
        if let Some(s) = self.reg.read().unwrap().by_index.get(&(field, idx.clone())) {
            return s.clone();
        }
        let s = Symbol::new(&self.name(field, &idx), SymbolClass::Jet);
        self.register(s.clone(), field, idx);
        s
    }

    pub fn jet_expr(&self, field: usize, idx: &[usize]) -> Expr {
        self.jet(field, idx).expr()
    }

    /// `u^A_{,i}` for a dependent field.
    pub fn u1(&self, a: usize, i: usize) -> Expr {
        self.jet_expr(a, &[i])
    }

    /// `u^A_{,ij}`.
    pub fn u2(&self, a: usize, i: usize, j: usize) -> Expr {
        self.jet_expr(a, &[i, j])
    }

    /// Field index and multi-index of a symbol, if it is a field or jet.
    pub fn lookup(&self, s: &Symbol) -> Option<(usize, Vec<usize>)> {
        self.reg.read().unwrap().by_symbol.get(s).cloned()
    }

    /// All first-order jets of the dependent fields.
    pub fn first_jets(&self) -> Vec<Symbol> {
        (0..self.m).flat_map(|a| (0..self.n()).map(move |i| (a, i))).map(|(a, i)| self.jet(a, &[i])).collect()
    }

    /// Second-order jets `i <= j` of the dependent fields.
    pub fn second_jets(&self) -> Vec<Symbol> {
        let mut out = Vec::new();
        for a in 0..self.m {
            for i in 0..self.n() {
                for j in i..self.n() {
                    out.push(self.jet(a, &[i, j]));
                }
            }
        }
        out
    }

    /// Total derivative `D_i` on functions of `x`, fields and jets of any order.
    pub fn total(&self, f: &Expr, i: usize) -> Expr {
        let mut terms = vec![f.diff(&self.x[i])];
        for s in f.symbols() {
            if let Some((field, idx)) = self.lookup(s) {
                let mut next = idx.clone();
                next.push(i);
                let d = f.diff(s);
                if !d.is_zero() {
                    terms.push(self.jet_expr(field, &next) * d);
                }
            }
        }
        terms.into_iter().sum()
    }

    /// Derivative in `x^i` of a function of `(x, u)` that may also carry
    /// auxiliary fields: the `u` are held fixed, the auxiliary fields are not.
    pub fn partial_x(&self, f: &Expr, i: usize) -> Expr {
        let mut terms = vec![f.diff(&self.x[i])];
        for s in f.symbols() {
            if let Some((field, idx)) = self.lookup(s) {
                if field < self.m {
                    continue;
                }
                let mut next = idx.clone();
                next.push(i);
                let d = f.diff(s);
                if !d.is_zero() {
                    terms.push(self.jet_expr(field, &next) * d);
                }
            }
        }
        terms.into_iter().sum()
    }

    /// Replace the dependent fields and their jets by those of `target`
    /// fields (index map), e.g. to write the system for auxiliary fields.
    pub fn relabel(&self, f: &Expr, target: &[usize]) -> Expr {
        let mut sub = Substitution::new();
        for s in f.symbols() {
            if let Some((field, idx)) = self.lookup(s) {
                if field < self.m {
                    sub.insert(s.clone(), self.jet_expr(target[field], &idx));
                }
            }
        }
        if sub.is_empty() {
            f.clone()
        } else {
            f.subs(&sub)
        }
    }
}
