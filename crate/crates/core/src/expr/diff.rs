use std::collections::HashMap;


use super::poly::{Monomial, Poly, Q};
use super::{Atom, Expr, Kernel, Symbol};

fn atom_depends(a: &Atom, s: &Symbol) -> bool {
    match a {
        Atom::Sym(t) => t == s,
        Atom::Kernel(_, e) => e.depends_on(s),
    }
}

fn atom_diff(a: &Atom, s: &Symbol) -> Expr {
    match a {
        Atom::Sym(t) => {
            if t == s {
                Expr::one()
            } else {
                Expr::zero()
            }
        }
        Atom::Kernel(k, e) => {
            let de = e.diff(s);
            if de.is_zero() {
                return de;
            }
            let outer = match k {
                Kernel::Ln => e.recip(),
                Kernel::Sin => e.cos(),
                Kernel::Cos => -e.sin(),
                Kernel::Sinh => e.cosh(),
                Kernel::Cosh => e.sinh(),
                Kernel::Sqrt => (e.sqrt() * 2).recip(),
            };
            outer * de
        }
    }
}

fn diff_poly(p: &Poly, s: &Symbol) -> Expr {
    let mut acc = Poly::zero();
    let mut rest: Vec<Expr> = Vec::new();
    let mut cache: HashMap<Atom, Expr> = HashMap::new();
    for (m, c) in &p.terms {
        for (a, k) in &m.factors {
            if !atom_depends(a, s) {
                continue;
            }
            let da = cache.entry(a.clone()).or_insert_with(|| atom_diff(a, s)).clone();
            if da.is_zero() {
                continue;
            }
            let mut m2 = m.without(a);
            if *k > 1 {
                m2 = mono_mul_atom(&m2, a, k - 1);
            }
            let coeff = c * Q::from_integer((*k).into());
            let t = Poly::from_monomial(m2, coeff);
            if da.is_polynomial() {
                acc = acc.add(&t.mul(da.num_ref()));
            } else {
                rest.push(Expr::raw(t, Poly::one()) * da);
            }
        }
        if let Some(arg) = &m.exp {
            if arg.depends_on(s) {
                let da = arg.diff(s);
                let t = Poly::from_monomial(m.clone(), c.clone());
                if da.is_polynomial() {
                    acc = acc.add(&t.mul(da.num_ref()));
                } else {
                    rest.push(Expr::raw(t, Poly::one()) * da);
                }
            }
        }
    }
    let mut out = Expr::raw(acc, Poly::one());
    if !rest.is_empty() {
        rest.push(out);
        out = rest.into_iter().sum();
    }
    out
}

fn mono_mul_atom(m: &Monomial, a: &Atom, k: u32) -> Monomial {
    let mut m = m.clone();
    match m.factors.iter().position(|(b, _)| b >= a) {
        Some(i) if m.factors[i].0 == *a => m.factors[i].1 += k,
        Some(i) => m.factors.insert(i, (a.clone(), k)),
        None => m.factors.push((a.clone(), k)),
    }
    m
}

impl Expr {
    /// Partial derivative with respect to `s`.
    pub fn diff(&self, s: &Symbol) -> Expr {
        if !self.depends_on(s) {
            return Expr::zero();
        }
        let dn = diff_poly(self.num_ref(), s);
        if self.den_ref().is_one() {
            return dn;
        }
        let dd = diff_poly(self.den_ref(), s);
        let den = Expr::raw(self.den_ref().clone(), Poly::one());
        if dd.is_zero() {
            return dn / den;
        }
        let num = Expr::raw(self.num_ref().clone(), Poly::one());
        (dn * &den - num * dd) / (&den * &den)
    }

    /// Repeated partial derivatives.
    pub fn diff_n(&self, s: &Symbol, n: usize) -> Expr {
        let mut e = self.clone();
        for _ in 0..n {
            if e.is_zero() {
                break;
            }
            e = e.diff(s);
        }
        e
    }
}

