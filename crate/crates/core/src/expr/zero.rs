//! Zero testing: canonical form first, then seeded numeric sampling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use num_bigint::BigInt;
use std::hash::{Hash, Hasher};

use super::eval::{bits_for_digits, Bindings, Evaluator, Real};
use super::poly::Q;
use super::Expr;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ZeroVerdict {
    /// Zero; `probabilistic` when only numeric sampling established it.
    Zero { probabilistic: bool },
    NonZero,
}

impl ZeroVerdict {
    pub fn is_zero(self) -> bool {
        matches!(self, ZeroVerdict::Zero { .. })
    }

    pub fn is_probabilistic(self) -> bool {
        matches!(self, ZeroVerdict::Zero { probabilistic: true })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ZeroError {
    #[error("undecidable sample: no admissible point in {0} attempts")]
    Undecidable(usize),
}

const MAX_EXTRA_DIGITS: f64 = 2000.0;

/// Seeded numeric zero test.
#[derive(Clone, Debug)]
pub struct ZeroTest {
    pub seed: u64,
    pub samples: usize,
    pub digits: u32,
}

impl Default for ZeroTest {
    fn default() -> Self {
        ZeroTest { seed: 0x5eed_c011, samples: 20, digits: 40 }
    }
}

impl ZeroTest {
    pub fn with_seed(seed: u64) -> Self {
        ZeroTest { seed, ..Self::default() }
    }

    pub fn check(&self, e: &Expr) -> Result<ZeroVerdict, ZeroError> {
        if e.is_zero() {
            return Ok(ZeroVerdict::Zero { probabilistic: false });
        }
        // canonical form is unique for kernel-free expressions
        if !e.has_kernels() {
            return Ok(ZeroVerdict::NonZero);
        }
        let mut h = std::collections::hash_map::DefaultHasher::new();
        e.hash(&mut h);
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed ^ h.finish());
        let p = bits_for_digits(self.digits);
        let tol = Real::parse(&format!("1e-{}", self.digits.saturating_sub(10)), p);
        let tiny = Real::parse(&format!("1e-{}", self.digits * 2), p);
        let syms = e.symbols().to_vec();
        let mut good = 0;
        let max_attempts = 4 * self.samples.max(1);
        let mut attempts = 0;
        while good < self.samples && attempts < max_attempts {
            attempts += 1;
            let mut b = Bindings::new();
            for s in &syms {
                let q: i64 = rng.gen_range(2..=64);
                let n: i64 = rng.gen_range(1..=2 * q);
                b.set_exact(s.name(), Q::new(BigInt::from(n), BigInt::from(q)));
            }
            let Some((v, scale)) = self.sample(e, &b, p) else { continue };
            // cancellation in large terms hides small values; raise precision
            // until the rounding error is below the tolerance
            let lost = if scale > Real::from_i64(1, p) { (scale.ln().to_f64() / std::f64::consts::LN_10).ceil() } else { 0.0 };
            let (v, scale, tol) = if lost < 1.0 {
                (v, scale, tol.clone())
            } else if lost > MAX_EXTRA_DIGITS {
                continue;
            } else {
                let d = self.digits + lost as u32 + 2;
                let p2 = bits_for_digits(d);
                let Some((v, scale)) = self.sample(e, &b, p2) else { continue };
                (v, scale, Real::parse(&format!("1e-{}", d - 10), p2))
            };
            good += 1;
            let bound = (scale * &tol).max(&tiny);
            if v.abs() > bound {
                return Ok(ZeroVerdict::NonZero);
            }
        }
        if good == 0 {
            return Err(ZeroError::Undecidable(attempts));
        }
        Ok(ZeroVerdict::Zero { probabilistic: true })
    }

    /// Numerator value and term scale at one point; `None` off the domain.
    fn sample(&self, e: &Expr, b: &Bindings, p: usize) -> Option<(Real, Real)> {
        let mut ev = Evaluator::new(b, p);
        if !e.den_ref().is_one() {
            match ev.poly(e.den_ref()) {
                Ok((d, _)) if !d.is_zero() && d.is_finite() => {}
                _ => return None,
            }
        }
        let (v, scale) = ev.poly(e.num_ref()).ok()?;
        (v.is_finite() && scale.is_finite()).then_some((v, scale))
    }

    /// Convenience: undecidable counts as nonzero.
    pub fn is_zero(&self, e: &Expr) -> bool {
        matches!(self.check(e), Ok(ZeroVerdict::Zero { .. }))
    }
}
