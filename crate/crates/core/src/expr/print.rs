use std::fmt::{self, Write};

use num_traits::{One, Signed};

use super::poly::{Monomial, Poly, Q};
use super::{Atom, Expr, Kernel, Symbol};

/// Tree view of a canonical expression, one level at a time.
#[derive(Clone, Debug, PartialEq)]
pub enum Node {
    Rational(Q),
    Symbol(Symbol),
    Sum(Vec<Expr>),
    Product(Vec<Expr>),
    Pow(Expr, i64),
    Kernel(Kernel, Expr),
    Exp(Expr),
}

fn atom_expr(a: &Atom) -> Expr {
    Expr::raw(Poly::from_monomial(Monomial::atom(a.clone(), 1), Q::one()), Poly::one())
}

impl Expr {
    pub fn node(&self) -> Node {
        if !self.0.den.is_one() {
            let den = Expr::raw(self.0.den.clone(), Poly::one());
            let num = Expr::raw(self.0.num.clone(), Poly::one());
            if num.is_one() {
                return Node::Pow(den, -1);
            }
            return Node::Product(vec![num, Expr::raw(Poly::one(), self.0.den.clone())]);
        }
        let p = &self.0.num;
        if p.is_zero() {
            return Node::Rational(Q::from_integer(0.into()));
        }
        if p.terms.len() > 1 {
            return Node::Sum(
                p.terms.iter().map(|(m, c)| Expr::raw(Poly::from_monomial(m.clone(), c.clone()), Poly::one())).collect(),
            );
        }
        let (m, c) = &p.terms[0];
        let mut parts: Vec<Expr> = Vec::new();
        if !c.is_one() {
            parts.push(Expr::rational(c.clone()));
        }
        for (a, k) in &m.factors {
            if *k == 1 {
                parts.push(atom_expr(a));
            } else {
                parts.push(Expr::raw(Poly::from_monomial(Monomial::atom(a.clone(), *k), Q::one()), Poly::one()));
            }
        }
        if let Some(e) = &m.exp {
            parts.push(Expr::raw(Poly::from_monomial(Monomial::exp_of(e.clone()), Q::one()), Poly::one()));
        }
        if parts.len() > 1 {
            return Node::Product(parts);
        }
        if m.is_one() {
            return Node::Rational(c.clone());
        }
        if let Some(e) = &m.exp {
            return Node::Exp(e.clone());
        }
        let (a, k) = &m.factors[0];
        if *k > 1 {
            return Node::Pow(atom_expr(a), *k as i64);
        }
        match a {
            Atom::Sym(s) => Node::Symbol(s.clone()),
            Atom::Kernel(k, e) => Node::Kernel(*k, e.clone()),
        }
    }
}

fn write_rational(out: &mut String, q: &Q) {
    if q.is_integer() {
        write!(out, "{}", q.numer()).unwrap();
    } else {
        write!(out, "{}/{}", q.numer(), q.denom()).unwrap();
    }
}

fn write_monomial(out: &mut String, m: &Monomial) {
    let mut first = true;
    for (a, k) in &m.factors {
        if !first {
            out.push('*');
        }
        first = false;
        match a {
            Atom::Sym(s) => out.push_str(s.name()),
            Atom::Kernel(k, e) => {
                write!(out, "{}({})", k.name(), e).unwrap();
            }
        }
        if *k > 1 {
            write!(out, "^{}", k).unwrap();
        }
    }
    if let Some(e) = &m.exp {
        if !first {
            out.push('*');
        }
        write!(out, "exp({})", e).unwrap();
    }
}

/// Term with its sign already handled by the caller.
fn write_term(out: &mut String, m: &Monomial, c: &Q) {
    if m.is_one() {
        write_rational(out, c);
        return;
    }
    if !c.is_one() {
        write_rational(out, c);
        out.push('*');
    }
    write_monomial(out, m);
}

fn write_poly(out: &mut String, p: &Poly) {
    if p.is_zero() {
        out.push('0');
        return;
    }
    for (i, (m, c)) in p.terms.iter().enumerate() {
        if i == 0 {
            if c.is_negative() {
                out.push('-');
            }
        } else if c.is_negative() {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        write_term(out, m, &c.abs());
    }
}

fn is_bare_atom(p: &Poly) -> bool {
    p.terms.len() == 1 && p.terms[0].1.is_one() && p.terms[0].0.exp.is_none() && {
        let f = &p.terms[0].0.factors;
        f.len() == 1 && f[0].1 == 1
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        if self.0.den.is_one() {
            write_poly(&mut s, &self.0.num);
        } else {
            if self.0.num.terms.len() > 1 {
                s.push('(');
                write_poly(&mut s, &self.0.num);
                s.push(')');
            } else {
                write_poly(&mut s, &self.0.num);
            }
            s.push('/');
            if is_bare_atom(&self.0.den) {
                write_poly(&mut s, &self.0.den);
            } else {
                s.push('(');
                write_poly(&mut s, &self.0.den);
                s.push(')');
            }
        }
        f.write_str(&s)
    }
}
