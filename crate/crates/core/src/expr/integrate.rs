//! A small antiderivative routine: polynomial times exp(linear) by parts,
//! and `c/x -> c ln x`. Anything else is reported as unavailable.

use super::poly::{Monomial, Poly};
use super::{Atom, Expr, Symbol};

fn term_integral(t: &Poly, s: &Symbol) -> Option<Expr> {
    let (m, c) = t.lead().clone();
    let mut k: u32 = 0;
    let mut rest = Monomial { factors: Default::default(), exp: None };
    for (a, p) in &m.factors {
        match a {
            Atom::Sym(x) if x == s => k = *p,
            Atom::Sym(_) => rest.factors.push((a.clone(), *p)),
            Atom::Kernel(_, e) => {
                if e.depends_on(s) {
                    return None;
                }
                rest.factors.push((a.clone(), *p));
            }
        }
    }
    let coeff = Expr::raw(Poly::from_monomial(rest, c), Poly::one());
    let xs = s.expr();
    match &m.exp {
        Some(arg) if arg.depends_on(s) => {
            let alpha = arg.diff(s);
            if alpha.depends_on(s) {
                return None;
            }
            // int x^k e^{alpha x + beta} = e^{..} sum_j (-1)^j k!/(k-j)! x^{k-j} / alpha^{j+1}
            let mut sum = Expr::zero();
            let mut fall = Expr::one();
            for j in 0..=k {
                let sign = if j % 2 == 0 { 1 } else { -1 };
                let term = &fall * xs.powi((k - j) as i64) / alpha.powi(j as i64 + 1) * sign;
                sum = sum + term;
                fall = fall * Expr::int((k - j) as i64);
            }
            Some(coeff * arg.exp() * sum)
        }
        Some(arg) => Some(coeff * arg.exp() * xs.powi(k as i64 + 1) / Expr::int(k as i64 + 1)),
        None => Some(coeff * xs.powi(k as i64 + 1) / Expr::int(k as i64 + 1)),
    }
}

/// Antiderivative with respect to `s`, if within reach.
pub fn integrate(e: &Expr, s: &Symbol) -> Option<Expr> {
    if !e.depends_on(s) {
        return Some(e * &s.expr());
    }
    let den = e.denominator();
    let num = e.numerator();
    if den.depends_on(s) {
        // c / (s * d) with c, d free of s
        if num.depends_on(s) {
            return None;
        }
        let d = den.num_ref();
        if !d.is_monomial() {
            return None;
        }
        let (m, _) = d.lead();
        let xa = Atom::Sym(s.clone());
        if m.power_of(&xa) != 1 || m.exp.as_ref().map(|a| a.depends_on(s)).unwrap_or(false) {
            return None;
        }
        let other = &den / &s.expr();
        if other.depends_on(s) {
            return None;
        }
        return Some(num / other * s.expr().ln());
    }
    let mut acc = Vec::new();
    for (m, c) in &num.num_ref().terms {
        let t = Poly::from_monomial(m.clone(), c.clone());
        acc.push(term_integral(&t, s)?);
    }
    Some(acc.into_iter().sum::<Expr>() / den)
}

/// Potential of a closed one-form `w_i dx^i` by successive line integration.
pub fn potential(w: &[Expr], vars: &[Symbol]) -> Option<Expr> {
    let mut phi = Expr::zero();
    for (i, s) in vars.iter().enumerate() {
        let r = &w[i] - phi.diff(s);
        if vars[..i].iter().any(|t| !r.diff(t).is_zero()) {
            return None;
        }
        phi = phi + integrate(&r, s)?;
    }
    Some(phi)
}
