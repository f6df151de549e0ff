//! Normalization of `num/den` pairs and the `sqrt` constructor.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use smallvec::SmallVec;

use super::gcd::{self, Exps, FPoly};
use super::poly::{Monomial, Poly, Q};
use super::{Atom, Expr, Kernel};

pub(crate) fn normalize(num: Poly, den: Poly) -> (Poly, Poly) {
    assert!(!den.is_zero(), "division by zero");
    if num.is_zero() {
        return (Poly::zero(), Poly::one());
    }
    if let Some(c) = den.as_constant() {
        let inv = Q::one() / c;
        return (num.scale(&inv), Poly::one());
    }
    let (num, den) = rationalize(num, den);
    if let Some(c) = den.as_constant() {
        let inv = Q::one() / c;
        return (num.scale(&inv), Poly::one());
    }
    let (num, den) = if den.is_monomial() { cancel_monomial(num, den) } else { cancel(num, den) };
    normalize_lead(num, den)
}

fn sqrt_atoms(p: &Poly) -> Vec<Atom> {
    p.atoms().into_iter().filter(|a| matches!(a, Atom::Kernel(Kernel::Sqrt, _))).collect()
}

fn poly_contains_atom(p: &Poly, a: &Atom) -> bool {
    p.terms.iter().any(|(m, _)| {
        m.factors.iter().any(|(b, _)| b == a || matches!(b, Atom::Kernel(_, e) if expr_contains_atom(e, a)))
            || m.exp.as_ref().map(|e| expr_contains_atom(e, a)).unwrap_or(false)
    })
}

fn expr_contains_atom(e: &Expr, a: &Atom) -> bool {
    poly_contains_atom(e.num_ref(), a) || poly_contains_atom(e.den_ref(), a)
}

fn rationalize(mut num: Poly, mut den: Poly) -> (Poly, Poly) {
    let mut skip: Vec<Atom> = Vec::new();
    for _ in 0..32 {
        let atoms: Vec<Atom> = sqrt_atoms(&den).into_iter().filter(|a| !skip.contains(a)).collect();
        let outer = atoms.iter().find(|s| {
            !atoms.iter().any(|o| o != *s && matches!(o, Atom::Kernel(_, e) if expr_contains_atom(e, s)))
        });
        let Some(s) = outer.cloned() else { break };
        let mut conj = Poly::zero();
        for (m, c) in &den.terms {
            if m.power_of(&s) == 1 {
                conj = conj.add(&Poly::from_monomial(m.clone(), -c));
            } else {
                conj = conj.add(&Poly::from_monomial(m.clone(), c.clone()));
            }
        }
        let nd = den.mul(&conj);
        if nd.is_zero() || sqrt_atoms(&nd).contains(&s) {
            skip.push(s);
            continue;
        }
        num = num.mul(&conj);
        den = nd;
    }
    (num, den)
}

fn cancel_monomial(num: Poly, den: Poly) -> (Poly, Poly) {
    let (dm, dc) = den.lead().clone();
    // move exp part and coefficient of the denominator into the numerator
    let mut shift = Monomial::one();
    if let Some(e) = &dm.exp {
        shift = Monomial::exp_of(-e);
    }
    let inv = Q::one() / dc;
    let mut num = num.mul(&Poly::from_monomial(shift, inv));
    let mut dfac: Vec<(Atom, u32)> = Vec::new();
    for (a, p) in &dm.factors {
        let mut k = *p;
        for (m, _) in &num.terms {
            k = k.min(m.power_of(a));
            if k == 0 {
                break;
            }
        }
        if k > 0 {
            num = Poly {
                terms: num
                    .terms
                    .into_iter()
                    .map(|(mut m, c)| {
                        for f in m.factors.iter_mut() {
                            if f.0 == *a {
                                f.1 -= k;
                            }
                        }
                        m.factors.retain(|f| f.1 > 0);
                        (m, c)
                    })
                    .collect(),
            };
        }
        if p - k > 0 {
            dfac.push((a.clone(), p - k));
        }
    }
    // removing a common factor keeps the relative term order
    let den = Poly::from_monomial(Monomial { factors: dfac.into_iter().collect(), exp: None }, Q::one());
    (num, den)
}

/// Variable table mapping atoms and exponential directions to free variables.
struct Table {
    atoms: Vec<Atom>,
    /// direction expression and the lcm of denominators of its multiples
    dirs: Vec<(Expr, BigInt)>,
}

fn split_direction(a: &Expr) -> (Expr, Q) {
    let q = a.num_ref().lead().1.clone();
    (a * &Expr::rational(Q::one() / &q), q)
}

impl Table {
    fn build(polys: &[&Poly]) -> Table {
        let mut atoms: Vec<Atom> = Vec::new();
        let mut dirs: BTreeMap<Expr, BigInt> = BTreeMap::new();
        for p in polys {
            for (m, _) in &p.terms {
                for (a, _) in &m.factors {
                    if !atoms.contains(a) {
                        atoms.push(a.clone());
                    }
                }
                if let Some(e) = &m.exp {
                    for (d, q) in exp_components(e) {
                        let l = dirs.entry(d).or_insert_with(BigInt::one);
                        *l = l.lcm(q.denom());
                    }
                }
            }
        }
        atoms.sort();
        Table { atoms, dirs: dirs.into_iter().collect() }
    }

    fn nvars(&self) -> usize {
        self.atoms.len() + self.dirs.len()
    }

    /// Integer exponents over directions; may be negative.
    fn dir_exps(&self, m: &Monomial) -> Vec<i64> {
        let mut v = vec![0i64; self.dirs.len()];
        if let Some(e) = &m.exp {
            for (d, q) in exp_components(e) {
                let i = self.dirs.iter().position(|(x, _)| *x == d).expect("direction in table");
                let k = q * Q::from_integer(self.dirs[i].1.clone());
                v[i] += i64::try_from(k.to_integer()).expect("exp multiple fits");
            }
        }
        v
    }

    fn to_free(&self, p: &Poly) -> (FPoly, Vec<i64>) {
        let na = self.atoms.len();
        let rows: Vec<(Vec<i64>, &Monomial, &Q)> = p.terms.iter().map(|(m, c)| (self.dir_exps(m), m, c)).collect();
        let mut shift = vec![0i64; self.dirs.len()];
        for (d, _, _) in &rows {
            for (s, k) in shift.iter_mut().zip(d) {
                *s = (*s).min(*k);
            }
        }
        let mut map: BTreeMap<Exps, Q> = BTreeMap::new();
        for (d, m, c) in rows {
            let mut e = vec![0u32; self.nvars()];
            for (a, pw) in &m.factors {
                let i = self.atoms.binary_search(a).expect("atom in table");
                e[i] = *pw;
            }
            for (j, k) in d.iter().enumerate() {
                e[na + j] = (k - shift[j]) as u32;
            }
            *map.entry(e).or_insert_with(Q::zero) += c;
        }
        (FPoly::from_map(self.nvars(), map), shift)
    }

    fn lift_free(&self, f: &FPoly, shift: &[i64]) -> Poly {
        let na = self.atoms.len();
        let mut plain: HashMap<Monomial, Q> = HashMap::new();
        let mut extra = Poly::zero();
        for (e, c) in &f.terms {
            let mut exp_arg = Vec::new();
            for (j, (d, l)) in self.dirs.iter().enumerate() {
                let k = e[na + j] as i64 + shift[j];
                if k != 0 {
                    exp_arg.push(d * &Expr::rational(Q::new(BigInt::from(k), l.clone())));
                }
            }
            let exp_arg: Expr = exp_arg.into_iter().sum();
            let mut factors: SmallVec<[(Atom, u32); 4]> = SmallVec::new();
            let mut reduce = false;
            for (i, a) in self.atoms.iter().enumerate() {
                if e[i] > 0 {
                    if e[i] > 1 && matches!(a, Atom::Kernel(Kernel::Sqrt, _)) {
                        reduce = true;
                    }
                    factors.push((a.clone(), e[i]));
                }
            }
            let exp = if exp_arg.is_zero() { None } else { Some(exp_arg) };
            if reduce {
                let mut p = Poly::from_monomial(Monomial { factors: SmallVec::new(), exp }, c.clone());
                for (a, k) in factors {
                    p = p.mul(&Poly::from_monomial(Monomial::atom(a, 1), Q::one()).pow(k));
                }
                extra = extra.add(&p);
            } else {
                *plain.entry(Monomial { factors, exp }).or_insert_with(Q::zero) += c;
            }
        }
        Poly::from_map(plain).add(&extra)
    }
}

/// Split an exponential argument into (direction, rational multiple) pairs:
/// one pair per group of numerator terms sharing the same denominator.
fn exp_components(e: &Expr) -> Vec<(Expr, Q)> {
    vec![split_direction(e)]
}

fn cancel(num: Poly, den: Poly) -> (Poly, Poly) {
    let t = Table::build(&[&num, &den]);
    let (fnum, sn) = t.to_free(&num);
    let (fden, sd) = t.to_free(&den);
    let g = gcd::gcd(&fnum, &fden);
    if g.terms.len() == 1 && g.terms[0].0.iter().all(|&x| x == 0) && sn.iter().all(|&s| s == 0) && sd.iter().all(|&s| s == 0) {
        return (num, den);
    }
    let qn = fnum.div_exact(&g).expect("gcd divides numerator");
    let qd = fden.div_exact(&g).expect("gcd divides denominator");
    (t.lift_free(&qn, &sn), t.lift_free(&qd, &sd))
}

pub(crate) fn cofactors(a: &Poly, b: &Poly) -> (Poly, Poly) {
    if a.as_constant().is_some() || b.as_constant().is_some() {
        return (a.clone(), b.clone());
    }
    let t = Table::build(&[a, b]);
    let (fa, sa) = t.to_free(a);
    let (fb, sb) = t.to_free(b);
    let g = gcd::gcd(&fa, &fb);
    if g.terms.len() == 1 && g.terms[0].0.iter().all(|&x| x == 0) {
        return (a.clone(), b.clone());
    }
    let qa = fa.div_exact(&g).expect("gcd divides");
    let qb = fb.div_exact(&g).expect("gcd divides");
    (t.lift_free(&qa, &sa), t.lift_free(&qb, &sb))
}

fn normalize_lead(num: Poly, den: Poly) -> (Poly, Poly) {
    let lead = den.lead().0.clone();
    let group: Vec<&(Monomial, Q)> =
        den.terms.iter().filter(|(m, _)| m.cmp_atoms(&lead) == std::cmp::Ordering::Equal).collect();
    let zero = Expr::zero();
    let arg = |m: &Monomial| m.exp.clone().unwrap_or_else(Expr::zero);
    let chosen: &(Monomial, Q) = if group.len() == 1 {
        group[0]
    } else {
        // translation-invariant choice among the exponential parts of the lead group
        let mut best: Option<(Vec<Expr>, &(Monomial, Q))> = None;
        for cand in &group {
            let e = arg(&cand.0);
            let mut key: Vec<Expr> = group.iter().map(|t| arg(&t.0) - &e).collect();
            key.sort();
            let better = match &best {
                None => true,
                Some((k, b)) => key < *k || (key == *k && cand.0.exp.is_none() && b.0.exp.is_some()),
            };
            if better {
                best = Some((key, cand));
            }
        }
        best.unwrap().1
    };
    let shift_arg = chosen.0.exp.clone().unwrap_or(zero);
    let inv = Q::one() / &chosen.1;
    let unit = Poly::from_monomial(Monomial::exp_of(-shift_arg), inv);
    if unit.is_one() {
        return (num, den);
    }
    (num.mul(&unit), den.mul(&unit))
}

fn square_split(n: &BigInt) -> (BigInt, BigInt) {
    // n = s^2 * r with r having no small square factors
    let mut s = BigInt::one();
    let mut r = n.clone();
    if r.is_zero() {
        return (BigInt::zero(), BigInt::one());
    }
    let mut p = BigInt::from(2u32);
    let limit = BigInt::from(10_000u32);
    while &p * &p <= r && p < limit {
        let p2 = &p * &p;
        while (&r % &p2).is_zero() {
            r /= &p2;
            s *= &p;
        }
        p += 1u32;
    }
    let root = r.sqrt();
    if &root * &root == r {
        s *= root;
        r = BigInt::one();
    }
    (s, r)
}

pub(crate) fn sqrt(e: &Expr) -> Expr {
    if e.is_zero() {
        return Expr::zero();
    }
    // sqrt(N/D) = sqrt(N D)/D
    let den = e.den_ref().clone();
    let arg = e.num_ref().mul(&den);
    let outer_den = Expr::raw(den, Poly::one()).recip();

    let c = arg.content();
    let inner = arg.scale(&(Q::one() / &c));
    let neg = c.is_negative();
    let c = c.abs();
    let nd = c.numer() * c.denom();
    let (s, r) = square_split(&nd);
    let mut outer = Expr::rational(Q::new(s, c.denom().clone()));
    let mut inner = inner.scale(&Q::from_integer(if neg { -r } else { r }));

    // monomial content: even atom powers and, for a lone monomial, the exponential part
    let mut pulled: Vec<(Atom, u32)> = Vec::new();
    if let Some((m0, _)) = inner.terms.first() {
        for (a, p) in &m0.factors {
            let mut k = *p;
            for (m, _) in &inner.terms {
                k = k.min(m.power_of(a));
            }
            let k = k - k % 2;
            if k > 0 && !matches!(a, Atom::Kernel(Kernel::Sqrt, _)) {
                pulled.push((a.clone(), k));
            }
        }
    }
    for (a, k) in &pulled {
        inner = Poly {
            terms: inner
                .terms
                .into_iter()
                .map(|(mut m, c)| {
                    for f in m.factors.iter_mut() {
                        if f.0 == *a {
                            f.1 -= k;
                        }
                    }
                    m.factors.retain(|f| f.1 > 0);
                    (m, c)
                })
                .collect(),
        };
        outer = outer * Expr::raw(Poly::from_monomial(Monomial::atom(a.clone(), k / 2), Q::one()), Poly::one());
    }
    if inner.is_monomial() {
        let (m, c) = inner.terms[0].clone();
        if let Some(ea) = &m.exp {
            outer = outer * (ea * &Expr::frac(1, 2)).exp();
            inner = Poly::from_monomial(Monomial { factors: m.factors.clone(), exp: None }, c);
        }
    }
    if inner.is_one() {
        return outer * outer_den;
    }
    let atom = Expr::atom(Atom::Kernel(Kernel::Sqrt, Expr::raw(inner, Poly::one())));
    atom * outer * outer_den
}
