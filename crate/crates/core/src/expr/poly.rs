//! Sparse polynomials over Q in atoms, with an optional exponential part per
//! monomial. `sqrt` atoms are kept reduced: powers are 0 or 1.

use std::cmp::Ordering;
use std::collections::HashMap;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use smallvec::SmallVec;

use super::{Atom, Expr, Kernel};

pub type Q = BigRational;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub(crate) struct Monomial {
    /// Sorted ascending by atom, powers >= 1.
    pub(crate) factors: SmallVec<[(Atom, u32); 4]>,
    pub(crate) exp: Option<Expr>,
}

impl Monomial {
    pub(crate) fn one() -> Self {
        Monomial { factors: SmallVec::new(), exp: None }
    }

    pub(crate) fn atom(a: Atom, p: u32) -> Self {
        let mut factors = SmallVec::new();
        if p > 0 {
            factors.push((a, p));
        }
        Monomial { factors, exp: None }
    }

    pub(crate) fn exp_of(arg: Expr) -> Self {
        Monomial { factors: SmallVec::new(), exp: if arg.is_zero() { None } else { Some(arg) } }
    }

    pub(crate) fn is_one(&self) -> bool {
        self.factors.is_empty() && self.exp.is_none()
    }

    pub(crate) fn degree(&self) -> u32 {
        self.factors.iter().map(|(_, p)| *p).sum()
    }

    pub(crate) fn power_of(&self, a: &Atom) -> u32 {
        self.factors.iter().find(|(b, _)| b == a).map(|(_, p)| *p).unwrap_or(0)
    }

    /// Same monomial without `a`.
    pub(crate) fn without(&self, a: &Atom) -> Monomial {
        Monomial {
            factors: self.factors.iter().filter(|(b, _)| b != a).cloned().collect(),
            exp: self.exp.clone(),
        }
    }

    /// Atom part compared in printing order; exponential part ignored.
    pub(crate) fn cmp_atoms(&self, other: &Self) -> Ordering {
        other
            .degree()
            .cmp(&self.degree())
            .then_with(|| lex_cmp(&self.factors, &other.factors))
    }

    /// Product of the atom parts plus any `sqrt` squares that were reduced.
    fn mul_raw(&self, other: &Self) -> (Monomial, SmallVec<[(Expr, u32); 1]>) {
        let mut factors: SmallVec<[(Atom, u32); 4]> = SmallVec::new();
        let (a, b) = (&self.factors, &other.factors);
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            let ord = if i == a.len() {
                Ordering::Greater
            } else if j == b.len() {
                Ordering::Less
            } else {
                a[i].0.cmp(&b[j].0)
            };
            match ord {
                Ordering::Less => {
                    factors.push(a[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    factors.push(b[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    factors.push((a[i].0.clone(), a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        let mut extracted = SmallVec::new();
        factors.retain(|(atom, p)| {
            if let Atom::Kernel(Kernel::Sqrt, arg) = atom {
                if *p >= 2 {
                    extracted.push((arg.clone(), *p / 2));
                    *p %= 2;
                }
            }
            *p > 0
        });
        let exp = match (&self.exp, &other.exp) {
            (None, None) => None,
            (Some(e), None) | (None, Some(e)) => Some(e.clone()),
            (Some(x), Some(y)) => {
                let s = x + y;
                if s.is_zero() {
                    None
                } else {
                    Some(s)
                }
            }
        };
        (Monomial { factors, exp }, extracted)
    }
}

fn lex_cmp(a: &[(Atom, u32)], b: &[(Atom, u32)]) -> Ordering {
    // earlier atoms are more significant; a higher power comes first
    for (x, y) in a.iter().zip(b.iter()) {
        match x.0.cmp(&y.0) {
            Ordering::Equal => match y.1.cmp(&x.1) {
                Ordering::Equal => continue,
                o => return o,
            },
            // x.0 < y.0: `a` holds the more significant atom, so it comes first
            o => return o,
        }
    }
    b.len().cmp(&a.len())
}

/// Printing order of monomials: graded, then lexicographic, then exponential part.
pub(crate) fn term_order(a: &Monomial, b: &Monomial) -> Ordering {
    a.cmp_atoms(b).then_with(|| match (&a.exp, &b.exp) {
        (None, None) => Ordering::Equal,
        (None, Some(_)) => Ordering::Less,
        (Some(_), None) => Ordering::Greater,
        (Some(x), Some(y)) => x.cmp(y),
    })
}

#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub(crate) struct Poly {
    pub(crate) terms: Vec<(Monomial, Q)>,
}

impl Poly {
    pub(crate) fn zero() -> Self {
        Poly { terms: Vec::new() }
    }

    pub(crate) fn constant(q: Q) -> Self {
        if q.is_zero() {
            Poly::zero()
        } else {
            Poly { terms: vec![(Monomial::one(), q)] }
        }
    }

    pub(crate) fn one() -> Self {
        Poly::constant(Q::one())
    }

    pub(crate) fn from_monomial(m: Monomial, q: Q) -> Self {
        if q.is_zero() {
            return Poly::zero();
        }
        // a lone sqrt atom power or exp part is already reduced by construction
        Poly { terms: vec![(m, q)] }
    }

    pub(crate) fn from_map(map: HashMap<Monomial, Q>) -> Self {
        let mut terms: Vec<(Monomial, Q)> = map.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by(|a, b| term_order(&a.0, &b.0));
        Poly { terms }
    }

    pub(crate) fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub(crate) fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    pub(crate) fn as_constant(&self) -> Option<Q> {
        match self.terms.len() {
            0 => Some(Q::zero()),
            1 if self.terms[0].0.is_one() => Some(self.terms[0].1.clone()),
            _ => None,
        }
    }

    pub(crate) fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub(crate) fn lead(&self) -> &(Monomial, Q) {
        &self.terms[0]
    }

    pub(crate) fn neg(&self) -> Poly {
        Poly { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }

    pub(crate) fn scale(&self, q: &Q) -> Poly {
        if q.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(m, c)| (m.clone(), c * q)).collect() }
    }

    pub(crate) fn add(&self, other: &Poly) -> Poly {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (a, b) = (&self.terms, &other.terms);
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            let ord = if i == a.len() {
                Ordering::Greater
            } else if j == b.len() {
                Ordering::Less
            } else {
                term_order(&a[i].0, &b[j].0)
            };
            match ord {
                Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let c = &a[i].1 + &b[j].1;
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        Poly { terms: out }
    }

    pub(crate) fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        if let Some(c) = self.as_constant() {
            return other.scale(&c);
        }
        if let Some(c) = other.as_constant() {
            return self.scale(&c);
        }
        let mut acc: HashMap<Monomial, Q> = HashMap::new();
        let mut extra = Poly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let (m, ext) = ma.mul_raw(mb);
                let c = ca * cb;
                if ext.is_empty() {
                    let e = acc.entry(m).or_insert_with(Q::zero);
                    *e += c;
                } else {
                    let mut p = Poly::from_monomial(m, c);
                    for (arg, k) in ext {
                        for _ in 0..k {
                            p = p.mul(&arg.num_poly());
                        }
                    }
                    extra = extra.add(&p);
                }
            }
        }
        Poly::from_map(acc).add(&extra)
    }

    pub(crate) fn pow(&self, mut k: u32) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Every atom occurring in a monomial factor list.
    pub(crate) fn atoms(&self) -> Vec<Atom> {
        let mut v: Vec<Atom> = Vec::new();
        for (m, _) in &self.terms {
            for (a, _) in &m.factors {
                if !v.contains(a) {
                    v.push(a.clone());
                }
            }
        }
        v.sort();
        v
    }

    pub(crate) fn has_kernels(&self) -> bool {
        self.terms.iter().any(|(m, _)| {
            m.exp.is_some() || m.factors.iter().any(|(a, _)| matches!(a, Atom::Kernel(..)))
        })
    }

    /// The rational content: gcd of numerators over lcm of denominators, sign of lead.
    pub(crate) fn content(&self) -> Q {
        use num_integer::Integer;
        let mut num = num_bigint::BigInt::zero();
        let mut den = num_bigint::BigInt::one();
        for (_, c) in &self.terms {
            num = num.gcd(c.numer());
            den = den.lcm(c.denom());
        }
        if self.terms.is_empty() {
            return Q::one();
        }
        let q = Q::new(num, den);
        if self.terms[0].1.is_negative() {
            -q
        } else {
            q
        }
    }
}
