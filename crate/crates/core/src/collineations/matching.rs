//! Coefficient matching: turn "sum_k c_k e_k = 0 for all values of the
//! variables" into linear rows over the parameter field.

use std::collections::HashMap;

use crate::expr::poly::{Monomial, Poly};
use crate::expr::{Atom, Expr, Symbol};

/// Split a polynomial into (variable-dependent key, parameter coefficient) pairs.
fn split_terms(p: &Poly, vars: &[Symbol]) -> Vec<(Monomial, Expr)> {
    let dep = |a: &Atom| match a {
        Atom::Sym(s) => vars.contains(s),
        Atom::Kernel(_, e) => e.depends_on_any(vars),
    };
    p.terms
        .iter()
        .map(|(m, c)| {
            let mut key = Monomial::one();
            let mut coef = Monomial::one();
            for (a, k) in &m.factors {
                if dep(a) {
                    key.factors.push((a.clone(), *k));
                } else {
                    coef.factors.push((a.clone(), *k));
                }
            }
            if let Some(arg) = &m.exp {
                if !arg.depends_on_any(vars) {
                    coef.exp = Some(arg.clone());
                } else if arg.denominator().depends_on_any(vars) {
                    key.exp = Some(arg.clone());
                } else {
                    let (mut kv, mut kp) = (Vec::new(), Vec::new());
                    for t in arg.terms() {
                        if t.depends_on_any(vars) {
                            kv.push(t);
                        } else {
                            kp.push(t);
                        }
                    }
                    let av: Expr = kv.into_iter().sum();
                    let ap: Expr = kp.into_iter().sum();
                    key.exp = Some(av);
                    if !ap.is_zero() {
                        coef.exp = Some(ap);
                    }
                }
            }
            let ce = Expr::from_poly(Poly::from_monomial(coef, c.clone()));
            (key, ce)
        })
        .collect()
}

fn lcm(a: &Poly, b: &Poly) -> Poly {
    let (_, bg) = crate::expr::canon_cofactors(a, b);
    a.mul(&bg)
}

/// Rows of the linear system `sum_k c_k e_k == 0` identically in `vars`.
/// Each condition is the list of coefficients `e_k`, one per unknown.
pub fn match_rows(conditions: &[Vec<Expr>], vars: &[Symbol]) -> Vec<Vec<Expr>> {
    let mut rows = Vec::new();
    for cond in conditions {
        let n = cond.len();
        if cond.iter().all(|e| e.is_zero()) {
            continue;
        }
        // only the variable-dependent part of the denominators matters, but the
        // full lcm is simpler and exact
        let mut l = Poly::one();
        for e in cond {
            if !e.is_zero() && !e.den_ref().is_one() {
                l = lcm(&l, e.den_ref());
            }
        }
        let le = Expr::from_poly(l);
        let mut table: HashMap<Monomial, Vec<Expr>> = HashMap::new();
        let mut order: Vec<Monomial> = Vec::new();
        for (k, e) in cond.iter().enumerate() {
            if e.is_zero() {
                continue;
            }
            let num = e * &le;
            // parameter-only leftovers of the denominator are fine: fold them in
            let (np, extra) = if num.is_polynomial() {
                (num.num_poly(), None)
            } else {
                let d = num.denominator();
                assert!(!d.depends_on_any(vars), "denominator not cleared: {}", d);
                (num.num_poly(), Some(d.recip()))
            };
            for (key, coef) in split_terms(&np, vars) {
                let coef = match &extra {
                    Some(x) => coef * x,
                    None => coef,
                };
                let row = table.entry(key.clone()).or_insert_with(|| {
                    order.push(key);
                    vec![Expr::zero(); n]
                });
                row[k] = &row[k] + &coef;
            }
        }
        for key in order {
            let r = table.remove(&key).unwrap();
            if r.iter().any(|e| !e.is_zero()) {
                rows.push(r);
            }
        }
    }
    rows
}


/// A polynomial in `vars` grouped by monomial: `(monomial, degree, coefficient)`.
/// `None` when a denominator depends on `vars`.
pub fn coefficients(e: &Expr, vars: &[Symbol]) -> Option<Vec<(Expr, u32, Expr)>> {
    let den = e.denominator();
    if den.depends_on_any(vars) {
        return None;
    }
    let inv = den.recip();
    let mut table: HashMap<Monomial, Expr> = HashMap::new();
    let mut order = Vec::new();
    for (key, c) in split_terms(e.num_ref(), vars) {
        match table.get_mut(&key) {
            Some(acc) => *acc = &*acc + &c,
            None => {
                order.push(key.clone());
                table.insert(key, c);
            }
        }
    }
    Some(
        order
            .into_iter()
            .filter_map(|k| {
                let c = table.remove(&k).unwrap();
                if c.is_zero() {
                    return None;
                }
                let deg = k.degree();
                Some((Expr::from_poly(Poly::from_monomial(k, crate::expr::Q::from_integer(1.into()))), deg, c * &inv))
            })
            .collect(),
    )
}
