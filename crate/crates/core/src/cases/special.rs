//! Series evaluation of Gamma, modified Bessel, Gauss hypergeometric and
//! Ferrers functions at arbitrary precision.
//!
//! `digits` is the target number of correct decimals; work is done with ten
//! guard digits. Derivatives come from the usual recurrences and ODEs, never
//! from finite differences.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::expr::{bits_for_digits, Real, Q};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpecialError {
    #[error("integer order {0} is a pole of the reflection formula for bessel_k")]
    IntegerOrder(i64),
    #[error("argument {0} outside the series range")]
    Range(String),
    #[error("gamma has a pole at {0}")]
    Pole(i64),
    #[error("series did not converge in {0} terms")]
    NoConvergence(usize),
}

const MAX_TERMS: usize = 20_000;

fn work_bits(digits: u32) -> usize {
    bits_for_digits(digits + 10)
}

fn eps(digits: u32, p: usize) -> Real {
    Real::parse(&format!("1e-{}", digits + 8), p)
}

fn lift(x: &Real, p: usize) -> Real {
    // re-round into the working precision
    x * &Real::from_i64(1, p)
}

/// `B_0, B_2, B_4, ...` as exact rationals.
fn bernoulli_even() -> &'static [Q] {
    static B: OnceLock<Vec<Q>> = OnceLock::new();
    B.get_or_init(|| {
        let n = 64;
        let mut b: Vec<Q> = Vec::with_capacity(n + 1);
        b.push(Q::one());
        for m in 1..=n {
            // sum_{k<m} C(m+1,k) B_k
            let mut s = Q::zero();
            let mut c = BigInt::one();
            for (k, bk) in b.iter().enumerate() {
                s += Q::from_integer(c.clone()) * bk;
                c = c * BigInt::from(m + 1 - k) / BigInt::from(k + 1);
            }
            b.push(-s / Q::from_integer(BigInt::from(m + 1)));
        }
        b.into_iter().step_by(2).collect()
    })
}

fn near_nonpositive_integer(x: &Real) -> Option<i64> {
    x.near_integer(1e-25).filter(|&k| k <= 0)
}

/// Gamma function.
pub fn gamma(x: &Real, digits: u32) -> Result<Real, SpecialError> {
    let p = work_bits(digits);
    let x = lift(x, p);
    if let Some(k) = near_nonpositive_integer(&x) {
        return Err(SpecialError::Pole(k));
    }
    let half = Real::from_q(&Q::new(1.into(), 2.into()), p);
    if x < half {
        let pi = Real::pi(p);
        let one = Real::from_i64(1, p);
        let s = (&pi * &x).sin();
        return Ok(&pi / &(s * gamma(&(&one - &x), digits)?));
    }
    // shift up, then Stirling
    let shift = 48 - x.to_f64().floor().clamp(0.0, 48.0) as i64;
    let mut prod = Real::from_i64(1, p);
    let mut z = x.clone();
    for _ in 0..shift {
        prod = prod * &z;
        z = z + Real::from_i64(1, p);
    }
    let two_pi = Real::pi(p) * Real::from_i64(2, p);
    let mut lg = (&z - &half) * z.ln() - &z + two_pi.ln() * &half;
    let b = bernoulli_even();
    let zr = z.recip();
    let z2 = &zr * &zr;
    let mut zp = zr.clone();
    for (k, bk) in b.iter().enumerate().skip(1) {
        let d = (2 * k) as i64 * (2 * k as i64 - 1);
        let t = Real::from_q(bk, p) * &zp / Real::from_i64(d, p);
        lg = lg + t;
        zp = zp * &z2;
    }
    Ok(lg.exp() / prod)
}

/// Modified Bessel function of the first kind, `0 <= x <= 10`.
pub fn bessel_i(order: &Real, x: &Real, digits: u32) -> Result<Real, SpecialError> {
    let p = work_bits(digits);
    let (nu, x) = (lift(order, p), lift(x, p));
    if x.is_negative() || x > Real::from_i64(10, p) {
        return Err(SpecialError::Range(x.to_string_digits(12)));
    }
    // I_{-n} = I_n for integer n
    let nu = match nu.near_integer(1e-25) {
        Some(k) if k < 0 => Real::from_i64(-k, p),
        _ => nu,
    };
    if x.is_zero() {
        return match nu.near_integer(1e-25) {
            Some(0) => Ok(Real::from_i64(1, p)),
            _ if !nu.is_negative() => Ok(Real::from_i64(0, p)),
            _ => Err(SpecialError::Range("0".into())),
        };
    }
    let half_x = &x / &Real::from_i64(2, p);
    let q = &half_x * &half_x;
    let mut t = half_x.powf(&nu) / gamma(&(&nu + &Real::from_i64(1, p)), digits)?;
    let mut sum = t.clone();
    let tol = eps(digits, p);
    for k in 0..MAX_TERMS {
        let kk = Real::from_i64(k as i64 + 1, p);
        t = t * &q / (&kk * &(&kk + &nu));
        sum = &sum + &t;
        if k >= 4 && t.abs() <= &tol * &sum.abs() {
            return Ok(sum);
        }
    }
    Err(SpecialError::NoConvergence(MAX_TERMS))
}

/// Modified Bessel function of the second kind for non-integer order.
pub fn bessel_k(order: &Real, x: &Real, digits: u32) -> Result<Real, SpecialError> {
    if let Some(k) = order.near_integer(1e-12) {
        return Err(SpecialError::IntegerOrder(k));
    }
    let d = digits + 20;
    let p = work_bits(d);
    let nu = lift(order, p);
    let a = bessel_i(&-&nu, x, d)?;
    let b = bessel_i(&nu, x, d)?;
    let pi = Real::pi(p);
    Ok(&pi / &Real::from_i64(2, p) * (a - b) / (&pi * &nu).sin())
}

/// Gauss hypergeometric series, `|x| < 1`.
pub fn hyp2f1(a: &Real, b: &Real, c: &Real, x: &Real, digits: u32) -> Result<Real, SpecialError> {
    let p = work_bits(digits);
    let (a, b, c, x) = (lift(a, p), lift(b, p), lift(c, p), lift(x, p));
    if x.abs() >= Real::from_i64(1, p) {
        return Err(SpecialError::Range(x.to_string_digits(12)));
    }
    if let Some(k) = near_nonpositive_integer(&c) {
        return Err(SpecialError::Pole(k));
    }
    let mut t = Real::from_i64(1, p);
    let mut sum = t.clone();
    let tol = eps(digits, p);
    for k in 0..MAX_TERMS {
        let kk = Real::from_i64(k as i64, p);
        let k1 = Real::from_i64(k as i64 + 1, p);
        t = t * (&a + &kk) * (&b + &kk) / ((&c + &kk) * &k1) * &x;
        sum = &sum + &t;
        if t.is_zero() || (k >= 4 && t.abs() <= &tol * &sum.abs().max(&Real::from_i64(1, p))) {
            return Ok(sum);
        }
    }
    Err(SpecialError::NoConvergence(MAX_TERMS))
}

/// Ferrers function of the first kind `P^mu_nu(z)`, `|z| < 1`.
pub fn legendre_p(degree: &Real, order: &Real, z: &Real, digits: u32) -> Result<Real, SpecialError> {
    let p = work_bits(digits);
    let (nu, mu, z) = (lift(degree, p), lift(order, p), lift(z, p));
    let one = Real::from_i64(1, p);
    let two = Real::from_i64(2, p);
    if z.abs() >= one {
        return Err(SpecialError::Range(z.to_string_digits(12)));
    }
    let f = hyp2f1(&-&nu, &(&nu + &one), &(&one - &mu), &((&one - &z) / &two), digits)?;
    let r = ((&one + &z) / (&one - &z)).powf(&(&mu / &two));
    Ok(r * f / gamma(&(&one - &mu), digits)?)
}

/// A special function of one argument with its parameters fixed.
#[derive(Clone, Debug)]
pub enum Special {
    BesselI(Real),
    BesselK(Real),
    Hyp2F1(Real, Real, Real),
}

impl Special {
    pub fn value(&self, x: &Real, digits: u32) -> Result<Real, SpecialError> {
        match self {
            Special::BesselI(n) => bessel_i(n, x, digits),
            Special::BesselK(n) => bessel_k(n, x, digits),
            Special::Hyp2F1(a, b, c) => hyp2f1(a, b, c, x, digits),
        }
    }

    /// Value, first and second derivative.
    pub fn jet(&self, x: &Real, digits: u32) -> Result<[Real; 3], SpecialError> {
        let p = work_bits(digits);
        let one = Real::from_i64(1, p);
        let two = Real::from_i64(2, p);
        match self {
            Special::BesselI(n) | Special::BesselK(n) => {
                let f = self.value(x, digits)?;
                let (lo, hi) = (n - &one, n + &one);
                let d = match self {
                    Special::BesselI(_) => (bessel_i(&lo, x, digits)? + bessel_i(&hi, x, digits)?) / &two,
                    _ => -((bessel_k(&lo, x, digits)? + bessel_k(&hi, x, digits)?) / &two),
                };
                // x^2 f'' + x f' - (x^2 + n^2) f = 0
                let x = lift(x, p);
                let dd = -(&d / &x) + (&one + &(n * n) / &(&x * &x)) * &f;
                Ok([f, d, dd])
            }
            Special::Hyp2F1(a, b, c) => {
                let f = hyp2f1(a, b, c, x, digits)?;
                let d1 = hyp2f1(&(a + &one), &(b + &one), &(c + &one), x, digits)? * a * b / c;
                let d2 = hyp2f1(&(a + &two), &(b + &two), &(c + &two), x, digits)? * a * (a + &one) * b * (b + &one)
                    / (c * &(c + &one));
                Ok([f, d1, d2])
            }
        }
    }
}
