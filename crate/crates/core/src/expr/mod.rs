//! Exact symbolic expressions.
//!
//! An [`Expr`] is kept in a canonical rational form `num/den`, where both
//! parts are sparse polynomials over Q in *atoms*: symbols and the kernels
//! `ln, sin, cos, sinh, cosh, sqrt` applied to canonical arguments. `exp` is
//! not an atom; every monomial carries at most one exponential factor whose
//! argument merges on multiplication, so `exp(a)*exp(b) = exp(a+b)` holds
//! structurally.
//!
//! Canonical rules, applied on every construction:
//! - `num` and `den` share no common factor (multivariate gcd);
//! - `den` has no `sqrt` atoms (conjugate rationalization) and its leading
//!   term has coefficient 1 and no exponential part;
//! - `sqrt` powers are reduced (`sqrt(a)^2 = a`), `ln(exp(a)) = a`.
//!
//! Two expressions that differ only by transcendental identities (for
//! instance `sin^2 + cos^2 - 1`) are not merged; [`zero::ZeroTest`] settles
//! those numerically.

mod canon;
pub(crate) mod gcd;
mod diff;
mod eval;
pub mod integrate;
mod parse;
pub(crate) mod poly;

pub(crate) use canon::cofactors as canon_cofactors;
mod print;
mod subst;
pub mod zero;

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};


pub use eval::{bits_for_digits, Bindings, EvalError, Real};
pub use parse::{ParseError, SymbolTable};
pub use poly::Q;
pub use print::Node;
pub use subst::Substitution;
pub use zero::{ZeroTest, ZeroVerdict};

use poly::{Monomial, Poly};

/// Role of a symbol. Part of symbol identity: `x` as a coordinate and `x`
/// as a parameter are different symbols.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum SymbolClass {
    CoordX,
    CoordU,
    Jet,
    Parameter,
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Symbol {
    name: Arc<str>,
    class: SymbolClass,
}

impl Symbol {
    pub fn new(name: &str, class: SymbolClass) -> Self {
        Symbol { name: Arc::from(name), class }
    }

    pub fn coord(name: &str) -> Self {
        Symbol::new(name, SymbolClass::CoordX)
    }

    pub fn field(name: &str) -> Self {
        Symbol::new(name, SymbolClass::CoordU)
    }

    pub fn param(name: &str) -> Self {
        Symbol::new(name, SymbolClass::Parameter)
    }

    pub fn jet(name: &str) -> Self {
        Symbol::new(name, SymbolClass::Jet)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn class(&self) -> SymbolClass {
        self.class
    }

    pub fn expr(&self) -> Expr {
        Expr::symbol(self.clone())
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Kernel {
    Ln,
    Sin,
    Cos,
    Sinh,
    Cosh,
    Sqrt,
}

impl Kernel {
    pub fn name(self) -> &'static str {
        match self {
            Kernel::Ln => "ln",
            Kernel::Sin => "sin",
            Kernel::Cos => "cos",
            Kernel::Sinh => "sinh",
            Kernel::Cosh => "cosh",
            Kernel::Sqrt => "sqrt",
        }
    }
}

/// A polynomial variable of the canonical form.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Atom {
    Sym(Symbol),
    Kernel(Kernel, Expr),
}

impl Atom {
    fn sort_key(&self) -> (&str, u8) {
        match self {
            Atom::Sym(s) => (s.name(), 0),
            Atom::Kernel(k, _) => (k.name(), 1),
        }
    }
}

impl Ord for Atom {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sort_key().cmp(&other.sort_key()).then_with(|| match (self, other) {
            (Atom::Sym(a), Atom::Sym(b)) => a.class.cmp(&b.class),
            (Atom::Kernel(_, a), Atom::Kernel(_, b)) => a.cmp(b),
            _ => Ordering::Equal,
        })
    }
}

impl PartialOrd for Atom {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

struct Inner {
    num: Poly,
    den: Poly,
    hash: u64,
    syms: Arc<[Symbol]>,
}

/// A canonical exact expression. Cheap to clone.
#[derive(Clone)]
pub struct Expr(Arc<Inner>);

impl PartialEq for Expr {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.hash == other.0.hash && self.0.num == other.0.num && self.0.den == other.0.den)
    }
}

impl Eq for Expr {}

impl Hash for Expr {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write_u64(self.0.hash);
    }
}

impl Ord for Expr {
    fn cmp(&self, other: &Self) -> Ordering {
        if self == other {
            return Ordering::Equal;
        }
        cmp_poly(&self.0.num, &other.0.num).then_with(|| cmp_poly(&self.0.den, &other.0.den))
    }
}

impl PartialOrd for Expr {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn cmp_poly(a: &Poly, b: &Poly) -> Ordering {
    for (x, y) in a.terms.iter().zip(b.terms.iter()) {
        let o = poly::term_order(&x.0, &y.0).then_with(|| x.1.cmp(&y.1));
        if o != Ordering::Equal {
            return o;
        }
    }
    a.terms.len().cmp(&b.terms.len())
}

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Expr({})", self)
    }
}

fn collect_syms(p: &Poly, out: &mut BTreeSet<Symbol>) {
    for (m, _) in &p.terms {
        for (a, _) in &m.factors {
            match a {
                Atom::Sym(s) => {
                    out.insert(s.clone());
                }
                Atom::Kernel(_, e) => out.extend(e.0.syms.iter().cloned()),
            }
        }
        if let Some(e) = &m.exp {
            out.extend(e.0.syms.iter().cloned());
        }
    }
}

impl Expr {
    /// Wrap parts that already satisfy the canonical rules.
    fn raw(num: Poly, den: Poly) -> Expr {
        let mut h = std::collections::hash_map::DefaultHasher::new();
        num.hash(&mut h);
        den.hash(&mut h);
        let mut set = BTreeSet::new();
        collect_syms(&num, &mut set);
        collect_syms(&den, &mut set);
        Expr(Arc::new(Inner { num, den, hash: h.finish(), syms: set.into_iter().collect() }))
    }

    pub(crate) fn from_poly(p: Poly) -> Expr {
        Expr::raw(p, Poly::one())
    }

    fn from_parts(num: Poly, den: Poly) -> Expr {
        let (n, d) = canon::normalize(num, den);
        Expr::raw(n, d)
    }

    pub(crate) fn num_poly(&self) -> Poly {
        self.0.num.clone()
    }

    pub(crate) fn num_ref(&self) -> &Poly {
        &self.0.num
    }

    pub(crate) fn den_ref(&self) -> &Poly {
        &self.0.den
    }

    pub fn zero() -> Expr {
        Expr::from_poly(Poly::zero())
    }

    pub fn one() -> Expr {
        Expr::from_poly(Poly::one())
    }

    pub fn rational(q: Q) -> Expr {
        Expr::from_poly(Poly::constant(q))
    }

    pub fn int(n: i64) -> Expr {
        Expr::rational(Q::from_integer(BigInt::from(n)))
    }

    pub fn frac(n: i64, d: i64) -> Expr {
        Expr::rational(Q::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn symbol(s: Symbol) -> Expr {
        Expr::from_poly(Poly::from_monomial(Monomial::atom(Atom::Sym(s), 1), Q::one()))
    }

    pub fn is_zero(&self) -> bool {
        self.0.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.num.is_one() && self.0.den.is_one()
    }

    /// The value if this is a rational constant.
    pub fn as_rational(&self) -> Option<Q> {
        let n = self.0.num.as_constant()?;
        let d = self.0.den.as_constant()?;
        Some(n / d)
    }

    pub fn is_polynomial(&self) -> bool {
        self.0.den.is_one()
    }

    /// Free symbols, sorted.
    pub fn symbols(&self) -> &[Symbol] {
        &self.0.syms
    }

    pub fn depends_on(&self, s: &Symbol) -> bool {
        self.0.syms.binary_search(s).is_ok()
    }

    pub fn depends_on_any(&self, ss: &[Symbol]) -> bool {
        ss.iter().any(|s| self.depends_on(s))
    }

    /// True when the expression contains any transcendental kernel or exponential.
    pub fn has_kernels(&self) -> bool {
        self.0.num.has_kernels() || self.0.den.has_kernels()
    }

    pub fn numerator(&self) -> Expr {
        Expr::from_poly(self.0.num.clone())
    }

    pub fn denominator(&self) -> Expr {
        Expr::from_poly(self.0.den.clone())
    }

    pub fn recip(&self) -> Expr {
        assert!(!self.is_zero(), "reciprocal of zero");
        Expr::from_parts(self.0.den.clone(), self.0.num.clone())
    }

    pub fn powi(&self, k: i64) -> Expr {
        if k == 0 {
            return Expr::one();
        }
        let base = if k < 0 { self.recip() } else { self.clone() };
        let e = k.unsigned_abs() as u32;
        if base.0.den.is_one() {
            return Expr::from_poly(base.0.num.pow(e));
        }
        Expr::from_parts(base.0.num.pow(e), base.0.den.pow(e))
    }

    pub fn exp(&self) -> Expr {
        if self.is_zero() {
            return Expr::one();
        }
        // exp(ln(a)) = a for a lone ln atom with integer multiple
        if let Some((k, arg)) = self.as_ln_multiple() {
            return arg.powi(k);
        }
        Expr::from_poly(Poly::from_monomial(Monomial::exp_of(self.clone()), Q::one()))
    }

    fn as_ln_multiple(&self) -> Option<(i64, Expr)> {
        if !self.0.den.is_one() || !self.0.num.is_monomial() {
            return None;
        }
        let (m, c) = self.0.num.lead();
        if m.exp.is_some() || m.factors.len() != 1 || m.factors[0].1 != 1 || !c.is_integer() {
            return None;
        }
        match &m.factors[0].0 {
            Atom::Kernel(Kernel::Ln, a) => Some((c.to_integer().to_i64()?, a.clone())),
            _ => None,
        }
    }

    pub fn ln(&self) -> Expr {
        if self.is_one() {
            return Expr::zero();
        }
        if self.0.den.is_one() && self.0.num.is_monomial() {
            let (m, c) = self.0.num.lead();
            if m.factors.is_empty() && c.is_one() {
                if let Some(a) = &m.exp {
                    return a.clone();
                }
            }
        }
        Expr::atom(Atom::Kernel(Kernel::Ln, self.clone()))
    }

    pub fn sin(&self) -> Expr {
        if self.is_zero() {
            return Expr::zero();
        }
        Expr::atom(Atom::Kernel(Kernel::Sin, self.clone()))
    }

    pub fn cos(&self) -> Expr {
        if self.is_zero() {
            return Expr::one();
        }
        Expr::atom(Atom::Kernel(Kernel::Cos, self.clone()))
    }

    pub fn sinh(&self) -> Expr {
        if self.is_zero() {
            return Expr::zero();
        }
        Expr::atom(Atom::Kernel(Kernel::Sinh, self.clone()))
    }

    pub fn cosh(&self) -> Expr {
        if self.is_zero() {
            return Expr::one();
        }
        Expr::atom(Atom::Kernel(Kernel::Cosh, self.clone()))
    }

    pub fn sqrt(&self) -> Expr {
        canon::sqrt(self)
    }

    pub fn kernel(k: Kernel, arg: &Expr) -> Expr {
        match k {
            Kernel::Ln => arg.ln(),
            Kernel::Sin => arg.sin(),
            Kernel::Cos => arg.cos(),
            Kernel::Sinh => arg.sinh(),
            Kernel::Cosh => arg.cosh(),
            Kernel::Sqrt => arg.sqrt(),
        }
    }

    fn atom(a: Atom) -> Expr {
        Expr::from_poly(Poly::from_monomial(Monomial::atom(a, 1), Q::one()))
    }

    pub fn pow_rational(&self, q: &Q) -> Expr {
        // integer part exactly; half-integers via sqrt; anything else via exp/ln
        if q.is_integer() {
            return self.powi(q.to_integer().to_i64().expect("exponent fits"));
        }
        if *q.denom() == BigInt::from(2) {
            let k = q.numer().to_i64().expect("exponent fits");
            return self.sqrt().powi(k);
        }
        (Expr::rational(q.clone()) * self.ln()).exp()
    }

    /// Split into terms of the numerator, each over the common denominator.
    pub fn terms(&self) -> Vec<Expr> {
        let den = Expr::from_poly(self.0.den.clone()).recip();
        self.0
            .num
            .terms
            .iter()
            .map(|(m, c)| Expr::from_poly(Poly::from_monomial(m.clone(), c.clone())) * den.clone())
            .collect()
    }

    /// Sign of a nonzero rational constant.
    pub fn rational_sign(&self) -> Option<i32> {
        self.as_rational().map(|q| if q.is_negative() { -1 } else if q.is_zero() { 0 } else { 1 })
    }

    /// Expressions are canonical on construction; kept for symmetry with the
    /// other operations.
    pub fn simplify(&self) -> Expr {
        self.clone()
    }

    /// Number of terms in the numerator plus the denominator; a size measure.
    pub fn size(&self) -> usize {
        self.0.num.terms.len() + self.0.den.terms.len()
    }
}

impl Default for Expr {
    fn default() -> Self {
        Expr::zero()
    }
}

impl From<i64> for Expr {
    fn from(n: i64) -> Self {
        Expr::int(n)
    }
}

impl From<Q> for Expr {
    fn from(q: Q) -> Self {
        Expr::rational(q)
    }
}

impl From<&Symbol> for Expr {
    fn from(s: &Symbol) -> Self {
        Expr::symbol(s.clone())
    }
}

fn add_exprs(a: &Expr, b: &Expr) -> Expr {
    if a.is_zero() {
        return b.clone();
    }
    if b.is_zero() {
        return a.clone();
    }
    if a.0.den.is_one() && b.0.den.is_one() {
        return Expr::from_poly(a.0.num.add(&b.0.num));
    }
    if a.0.den == b.0.den {
        return Expr::from_parts(a.0.num.add(&b.0.num), a.0.den.clone());
    }
    let (ga, gb) = canon::cofactors(&a.0.den, &b.0.den);
    // a/da + b/db with da = g*ga, db = g*gb
    let num = a.0.num.mul(&gb).add(&b.0.num.mul(&ga));
    let den = a.0.den.mul(&gb);
    Expr::from_parts(num, den)
}

fn mul_exprs(a: &Expr, b: &Expr) -> Expr {
    if a.is_zero() || b.is_zero() {
        return Expr::zero();
    }
    if a.is_one() {
        return b.clone();
    }
    if b.is_one() {
        return a.clone();
    }
    if a.0.den.is_one() && b.0.den.is_one() {
        return Expr::from_poly(a.0.num.mul(&b.0.num));
    }
    Expr::from_parts(a.0.num.mul(&b.0.num), a.0.den.mul(&b.0.den))
}

macro_rules! binop {
    ($tr:ident, $m:ident, $f:expr) => {
        impl $tr<Expr> for Expr {
            type Output = Expr;
            fn $m(self, rhs: Expr) -> Expr {
                $f(&self, &rhs)
            }
        }
        impl $tr<&Expr> for Expr {
            type Output = Expr;
            fn $m(self, rhs: &Expr) -> Expr {
                $f(&self, rhs)
            }
        }
        impl $tr<Expr> for &Expr {
            type Output = Expr;
            fn $m(self, rhs: Expr) -> Expr {
                $f(self, &rhs)
            }
        }
        impl $tr<&Expr> for &Expr {
            type Output = Expr;
            fn $m(self, rhs: &Expr) -> Expr {
                $f(self, rhs)
            }
        }
        impl $tr<i64> for Expr {
            type Output = Expr;
            fn $m(self, rhs: i64) -> Expr {
                $f(&self, &Expr::int(rhs))
            }
        }
        impl $tr<i64> for &Expr {
            type Output = Expr;
            fn $m(self, rhs: i64) -> Expr {
                $f(self, &Expr::int(rhs))
            }
        }
    };
}

binop!(Add, add, add_exprs);
binop!(Sub, sub, |a: &Expr, b: &Expr| add_exprs(a, &-b));
binop!(Mul, mul, mul_exprs);
binop!(Div, div, |a: &Expr, b: &Expr| mul_exprs(a, &b.recip()));

impl Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        -&self
    }
}

impl Neg for &Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::raw(self.0.num.neg(), self.0.den.clone())
    }
}

impl std::iter::Sum for Expr {
    fn sum<I: Iterator<Item = Expr>>(iter: I) -> Expr {
        // pairwise to keep intermediate denominators small
        let mut v: Vec<Expr> = iter.collect();
        if v.is_empty() {
            return Expr::zero();
        }
        if v.iter().all(|e| e.0.den.is_one()) {
            let mut acc = Poly::zero();
            for e in &v {
                acc = acc.add(&e.0.num);
            }
            return Expr::from_poly(acc);
        }
        while v.len() > 1 {
            let mut next = Vec::with_capacity(v.len() / 2 + 1);
            let mut it = v.into_iter();
            while let Some(a) = it.next() {
                match it.next() {
                    Some(b) => next.push(a + b),
                    None => next.push(a),
                }
            }
            v = next;
        }
        v.pop().unwrap()
    }
}

impl std::iter::Product for Expr {
    fn product<I: Iterator<Item = Expr>>(iter: I) -> Expr {
        iter.fold(Expr::one(), |a, b| a * b)
    }
}

#[cfg(test)]
mod tests;
