use std::collections::BTreeMap;

use super::poly::Poly;
use super::{Atom, Expr, Symbol};

/// Simultaneous substitution of symbols by expressions.
#[derive(Clone, Debug, Default)]
pub struct Substitution {
    map: BTreeMap<Symbol, Expr>,
}

impl Substitution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, s: Symbol, e: Expr) -> &mut Self {
        self.map.insert(s, e);
        self
    }

    pub fn with(mut self, s: Symbol, e: Expr) -> Self {
        self.map.insert(s, e);
        self
    }

    pub fn get(&self, s: &Symbol) -> Option<&Expr> {
        self.map.get(s)
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    fn touches(&self, e: &Expr) -> bool {
        e.symbols().iter().any(|s| self.map.contains_key(s))
    }
}

fn subs_atom(a: &Atom, sub: &Substitution) -> Expr {
    match a {
        Atom::Sym(s) => sub.map.get(s).cloned().unwrap_or_else(|| s.expr()),
        Atom::Kernel(k, e) => Expr::kernel(*k, &e.subs(sub)),
    }
}

fn subs_poly(p: &Poly, sub: &Substitution) -> Expr {
    let mut cache: BTreeMap<Atom, Expr> = BTreeMap::new();
    let terms = p.terms.iter().map(|(m, c)| {
        let mut t = Expr::rational(c.clone());
        for (a, k) in &m.factors {
            let v = cache.entry(a.clone()).or_insert_with(|| subs_atom(a, sub)).clone();
            t = t * v.powi(*k as i64);
        }
        if let Some(e) = &m.exp {
            t = t * e.subs(sub).exp();
        }
        t
    });
    terms.sum()
}

impl Expr {
    /// Simultaneous substitution. Panics if a denominator becomes zero.
    pub fn subs(&self, sub: &Substitution) -> Expr {
        if !sub.touches(self) {
            return self.clone();
        }
        let n = subs_poly(self.num_ref(), sub);
        if self.den_ref().is_one() {
            return n;
        }
        n / subs_poly(self.den_ref(), sub)
    }

    pub fn subs1(&self, s: &Symbol, e: &Expr) -> Expr {
        self.subs(&Substitution::new().with(s.clone(), e.clone()))
    }
}
