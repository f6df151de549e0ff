//! High-precision floating evaluation.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use astro_float::{BigFloat, Consts, Radix, RoundingMode};
use num_traits::ToPrimitive;
use thiserror::Error;

use super::poly::{Poly, Q};
use super::{Atom, Expr, Kernel};

const RM: RoundingMode = RoundingMode::ToEven;

thread_local! {
    static CC: RefCell<Consts> = RefCell::new(Consts::new().expect("constants cache"));
}

fn with_cc<T>(f: impl FnOnce(&mut Consts) -> T) -> T {
    CC.with(|c| f(&mut c.borrow_mut()))
}

/// Binary precision for a number of decimal digits, with guard bits.
pub fn bits_for_digits(digits: u32) -> usize {
    ((digits as f64) * std::f64::consts::LOG2_10).ceil() as usize + 64
}

/// Arbitrary-precision real carrying its working precision.
#[derive(Clone)]
pub struct Real {
    v: BigFloat,
    p: usize,
}

impl Real {
    pub fn from_f64(f: f64, p: usize) -> Real {
        Real { v: BigFloat::from_f64(f, p), p }
    }

    pub fn from_i64(n: i64, p: usize) -> Real {
        Real { v: BigFloat::from_i64(n, p), p }
    }

    pub fn from_q(q: &Q, p: usize) -> Real {
        let conv = |b: &num_bigint::BigInt| -> BigFloat {
            match b.to_i64() {
                Some(n) => BigFloat::from_i64(n, p),
                None => with_cc(|cc| BigFloat::parse(&b.to_string(), Radix::Dec, p, RM, cc)),
            }
        };
        let n = conv(q.numer());
        if q.is_integer() {
            return Real { v: n, p };
        }
        Real { v: n.div(&conv(q.denom()), p, RM), p }
    }

    /// Parse a decimal literal.
    pub fn parse(s: &str, p: usize) -> Real {
        Real { v: with_cc(|cc| BigFloat::parse(s, Radix::Dec, p, RM, cc)), p }
    }

    pub fn precision(&self) -> usize {
        self.p
    }

    pub fn to_f64(&self) -> f64 {
        if self.v.is_nan() {
            return f64::NAN;
        }
        if self.v.is_inf_pos() {
            return f64::INFINITY;
        }
        if self.v.is_inf_neg() {
            return f64::NEG_INFINITY;
        }
        let s = with_cc(|cc| self.v.format(Radix::Dec, RM, cc)).unwrap_or_default();
        s.parse::<f64>().unwrap_or(f64::NAN)
    }

    pub fn is_finite(&self) -> bool {
        !self.v.is_nan() && !self.v.is_inf()
    }

    pub fn is_zero(&self) -> bool {
        self.v.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.v.is_negative()
    }

    pub fn abs(&self) -> Real {
        Real { v: self.v.abs(), p: self.p }
    }

    pub fn exp(&self) -> Real {
        Real { v: with_cc(|cc| self.v.exp(self.p, RM, cc)), p: self.p }
    }

    pub fn ln(&self) -> Real {
        Real { v: with_cc(|cc| self.v.ln(self.p, RM, cc)), p: self.p }
    }

    pub fn sin(&self) -> Real {
        Real { v: with_cc(|cc| self.v.sin(self.p, RM, cc)), p: self.p }
    }

    pub fn cos(&self) -> Real {
        Real { v: with_cc(|cc| self.v.cos(self.p, RM, cc)), p: self.p }
    }

    pub fn sinh(&self) -> Real {
        Real { v: with_cc(|cc| self.v.sinh(self.p, RM, cc)), p: self.p }
    }

    pub fn cosh(&self) -> Real {
        Real { v: with_cc(|cc| self.v.cosh(self.p, RM, cc)), p: self.p }
    }

    pub fn sqrt(&self) -> Real {
        Real { v: self.v.sqrt(self.p, RM), p: self.p }
    }

    pub fn pi(p: usize) -> Real {
        Real { v: with_cc(|cc| cc.pi(p, RM)), p }
    }

    pub fn powi(&self, k: i64) -> Real {
        let v = self.v.powi(k.unsigned_abs() as usize, self.p, RM);
        let v = if k < 0 { v.reciprocal(self.p, RM) } else { v };
        Real { v, p: self.p }
    }

    /// `self^y` for positive `self`.
    pub fn powf(&self, y: &Real) -> Real {
        let p = self.p.max(y.p);
        Real { v: with_cc(|cc| self.v.pow(&y.v, p, RM, cc)), p }
    }

    pub fn recip(&self) -> Real {
        Real { v: self.v.reciprocal(self.p, RM), p: self.p }
    }

    pub fn max(&self, o: &Real) -> Real {
        if self.partial_cmp(o) == Some(Ordering::Less) {
            o.clone()
        } else {
            self.clone()
        }
    }

    /// Round to an integer when within `tol` of one.
    pub fn near_integer(&self, tol: f64) -> Option<i64> {
        let f = self.to_f64();
        let r = f.round();
        if (f - r).abs() < tol {
            Some(r as i64)
        } else {
            None
        }
    }

    /// Decimal string with `digits` significant digits.
    pub fn to_string_digits(&self, digits: usize) -> String {
        let p = ((digits as f64) * std::f64::consts::LOG2_10).ceil() as usize + 8;
        let mut v = self.v.clone();
        let _ = v.set_precision(p.max(64), RM);
        with_cc(|cc| v.format(Radix::Dec, RM, cc)).unwrap_or_else(|_| "NaN".into())
    }
}

impl PartialEq for Real {
    fn eq(&self, other: &Self) -> bool {
        self.v.cmp(&other.v) == Some(0)
    }
}

impl PartialOrd for Real {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.v.cmp(&other.v).map(|c| c.cmp(&0))
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.v)
    }
}

impl fmt::Debug for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Real({})", self.v)
    }
}

macro_rules! real_op {
    ($tr:ident, $m:ident) => {
        impl $tr<&Real> for &Real {
            type Output = Real;
            fn $m(self, r: &Real) -> Real {
                let p = self.p.max(r.p);
                Real { v: self.v.$m(&r.v, p, RM), p }
            }
        }
        impl $tr<Real> for Real {
            type Output = Real;
            fn $m(self, r: Real) -> Real {
                (&self).$m(&r)
            }
        }
        impl $tr<&Real> for Real {
            type Output = Real;
            fn $m(self, r: &Real) -> Real {
                (&self).$m(r)
            }
        }
        impl $tr<Real> for &Real {
            type Output = Real;
            fn $m(self, r: Real) -> Real {
                self.$m(&r)
            }
        }
    };
}

real_op!(Add, add);
real_op!(Sub, sub);
real_op!(Mul, mul);
real_op!(Div, div);

impl Neg for Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real { v: BigFloat::neg(&self.v), p: self.p }
    }
}

impl Neg for &Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real { v: BigFloat::neg(&self.v), p: self.p }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("unbound symbol '{0}'")]
    Unbound(String),
    #[error("{0} outside its domain")]
    Domain(&'static str),
    #[error("pole: denominator vanishes")]
    Pole,
}

#[derive(Clone, Debug)]
enum Value {
    Exact(Q),
    Float(Real),
}

/// Values for symbols, by name.
#[derive(Clone, Debug, Default)]
pub struct Bindings {
    vals: BTreeMap<String, Value>,
}

impl Bindings {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set_exact(&mut self, name: &str, q: Q) -> &mut Self {
        self.vals.insert(name.to_string(), Value::Exact(q));
        self
    }

    pub fn set_float(&mut self, name: &str, r: Real) -> &mut Self {
        self.vals.insert(name.to_string(), Value::Float(r));
        self
    }

    pub fn with_exact(mut self, name: &str, q: Q) -> Self {
        self.set_exact(name, q);
        self
    }

    pub fn with_float(mut self, name: &str, r: Real) -> Self {
        self.set_float(name, r);
        self
    }

    pub fn contains(&self, name: &str) -> bool {
        self.vals.contains_key(name)
    }

    pub fn exact(&self, name: &str) -> Option<&Q> {
        match self.vals.get(name) {
            Some(Value::Exact(q)) => Some(q),
            _ => None,
        }
    }

    fn get(&self, name: &str, p: usize) -> Option<Real> {
        self.vals.get(name).map(|v| match v {
            Value::Exact(q) => Real::from_q(q, p),
            Value::Float(r) => r.clone(),
        })
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.vals.keys().map(|s| s.as_str())
    }
}

pub(crate) struct Evaluator<'a> {
    b: &'a Bindings,
    p: usize,
    atoms: HashMap<Atom, Real>,
    exps: HashMap<Expr, Real>,
}

impl<'a> Evaluator<'a> {
    pub(crate) fn new(b: &'a Bindings, p: usize) -> Self {
        Evaluator { b, p, atoms: HashMap::new(), exps: HashMap::new() }
    }

    fn atom(&mut self, a: &Atom) -> Result<Real, EvalError> {
        if let Some(v) = self.atoms.get(a) {
            return Ok(v.clone());
        }
        let v = match a {
            Atom::Sym(s) => self.b.get(s.name(), self.p).ok_or_else(|| EvalError::Unbound(s.name().to_string()))?,
            Atom::Kernel(k, e) => {
                let x = self.expr(e)?;
                let v = match k {
                    Kernel::Ln => {
                        if x.is_negative() || x.is_zero() {
                            return Err(EvalError::Domain("ln"));
                        }
                        x.ln()
                    }
                    Kernel::Sqrt => {
                        if x.is_negative() {
                            return Err(EvalError::Domain("sqrt"));
                        }
                        x.sqrt()
                    }
                    Kernel::Sin => x.sin(),
                    Kernel::Cos => x.cos(),
                    Kernel::Sinh => x.sinh(),
                    Kernel::Cosh => x.cosh(),
                };
                if !v.is_finite() {
                    return Err(EvalError::Domain(k.name()));
                }
                v
            }
        };
        self.atoms.insert(a.clone(), v.clone());
        Ok(v)
    }

    fn exp_of(&mut self, e: &Expr) -> Result<Real, EvalError> {
        if let Some(v) = self.exps.get(e) {
            return Ok(v.clone());
        }
        let v = self.expr(e)?.exp();
        if !v.is_finite() {
            return Err(EvalError::Domain("exp"));
        }
        self.exps.insert(e.clone(), v.clone());
        Ok(v)
    }

    /// Value and sum of absolute term values.
    pub(crate) fn poly(&mut self, p: &Poly) -> Result<(Real, Real), EvalError> {
        let mut acc = Real::from_i64(0, self.p);
        let mut scale = Real::from_i64(0, self.p);
        for (m, c) in &p.terms {
            let mut t = Real::from_q(c, self.p);
            for (a, k) in &m.factors {
                let v = self.atom(a)?;
                t = t * v.powi(*k as i64);
            }
            if let Some(e) = &m.exp {
                t = t * self.exp_of(e)?;
            }
            scale = scale + t.abs();
            acc = acc + t;
        }
        Ok((acc, scale))
    }

    pub(crate) fn expr(&mut self, e: &Expr) -> Result<Real, EvalError> {
        let (n, _) = self.poly(e.num_ref())?;
        if e.den_ref().is_one() {
            return Ok(n);
        }
        let (d, _) = self.poly(e.den_ref())?;
        if d.is_zero() {
            return Err(EvalError::Pole);
        }
        Ok(n / d)
    }
}

impl Expr {
    /// Evaluate at `digits` decimal digits.
    pub fn eval_float(&self, b: &Bindings, digits: u32) -> Result<Real, EvalError> {
        Evaluator::new(b, bits_for_digits(digits)).expr(self)
    }

    pub fn eval_f64(&self, b: &Bindings) -> Result<f64, EvalError> {
        Ok(self.eval_float(b, 17)?.to_f64())
    }

    /// Exact value when every symbol is bound to an exact rational and no kernel occurs.
    pub fn eval_exact(&self, b: &Bindings) -> Option<Q> {
        if self.has_kernels() {
            return None;
        }
        let ev = |p: &Poly| -> Option<Q> {
            let mut acc = Q::from_integer(0.into());
            for (m, c) in &p.terms {
                let mut t = c.clone();
                for (a, k) in &m.factors {
                    let Atom::Sym(s) = a else { return None };
                    let v = b.exact(s.name())?;
                    t *= num_traits::pow::pow(v.clone(), *k as usize);
                }
                acc += t;
            }
            Some(acc)
        };
        let n = ev(self.num_ref())?;
        let d = ev(self.den_ref())?;
        if num_traits::Zero::is_zero(&d) {
            return None;
        }
        Some(n / d)
    }
}
