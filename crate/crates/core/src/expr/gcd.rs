//! Multivariate gcd and exact division over Q, on dense exponent vectors.
//! Recursive primitive PRS using pseudo-remainders.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::poly::Q;

pub(crate) type Exps = Vec<u32>;

#[derive(Clone, Debug, PartialEq)]
pub(crate) struct FPoly {
    pub(crate) nvars: usize,
    /// Sorted descending lexicographically by exponent vector.
    pub(crate) terms: Vec<(Exps, Q)>,
}

fn lex_desc(a: &Exps, b: &Exps) -> Ordering {
    b.cmp(a)
}

impl FPoly {
    pub(crate) fn zero(nvars: usize) -> Self {
        FPoly { nvars, terms: Vec::new() }
    }

    pub(crate) fn constant(nvars: usize, q: Q) -> Self {
        if q.is_zero() {
            return FPoly::zero(nvars);
        }
        FPoly { nvars, terms: vec![(vec![0; nvars], q)] }
    }

    pub(crate) fn from_map(nvars: usize, map: BTreeMap<Exps, Q>) -> Self {
        let mut terms: Vec<(Exps, Q)> = map.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by(|a, b| lex_desc(&a.0, &b.0));
        FPoly { nvars, terms }
    }

    pub(crate) fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn is_constant(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.iter().all(|&e| e == 0)
    }

    fn add(&self, o: &FPoly) -> FPoly {
        let mut m: BTreeMap<Exps, Q> = BTreeMap::new();
        for (e, c) in self.terms.iter().chain(o.terms.iter()) {
            *m.entry(e.clone()).or_insert_with(Q::zero) += c;
        }
        FPoly::from_map(self.nvars, m)
    }

    fn neg(&self) -> FPoly {
        FPoly { nvars: self.nvars, terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect() }
    }

    fn sub(&self, o: &FPoly) -> FPoly {
        self.add(&o.neg())
    }

    pub(crate) fn mul(&self, o: &FPoly) -> FPoly {
        let mut m: BTreeMap<Exps, Q> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &o.terms {
                let e: Exps = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                *m.entry(e).or_insert_with(Q::zero) += ca * cb;
            }
        }
        FPoly::from_map(self.nvars, m)
    }

    fn scale(&self, q: &Q) -> FPoly {
        FPoly { nvars: self.nvars, terms: self.terms.iter().map(|(e, c)| (e.clone(), c * q)).collect() }
    }

    fn monic(&self) -> FPoly {
        if self.is_zero() {
            return self.clone();
        }
        let inv = Q::one() / &self.terms[0].1;
        self.scale(&inv)
    }

    fn deg(&self, v: usize) -> u32 {
        self.terms.iter().map(|(e, _)| e[v]).max().unwrap_or(0)
    }

    fn min_exps(&self) -> Exps {
        let mut m = vec![u32::MAX; self.nvars];
        for (e, _) in &self.terms {
            for (a, b) in m.iter_mut().zip(e) {
                *a = (*a).min(*b);
            }
        }
        if self.terms.is_empty() {
            m.iter_mut().for_each(|a| *a = 0);
        }
        m
    }

    fn shift_down(&self, s: &Exps) -> FPoly {
        FPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.iter().zip(s).map(|(a, b)| a - b).collect(), c.clone())).collect(),
        }
    }

    fn shift_up(&self, s: &Exps) -> FPoly {
        FPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.iter().zip(s).map(|(a, b)| a + b).collect(), c.clone())).collect(),
        }
    }

    /// Coefficients with respect to `v`, keyed by the power of `v`.
    fn coeffs_in(&self, v: usize) -> BTreeMap<u32, FPoly> {
        let mut out: BTreeMap<u32, BTreeMap<Exps, Q>> = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            let k = e2[v];
            e2[v] = 0;
            out.entry(k).or_default().insert(e2, c.clone());
        }
        out.into_iter().map(|(k, m)| (k, FPoly::from_map(self.nvars, m))).collect()
    }

    fn lc_in(&self, v: usize) -> FPoly {
        let d = self.deg(v);
        self.coeffs_in(v).remove(&d).unwrap_or_else(|| FPoly::zero(self.nvars))
    }

    fn times_var(&self, v: usize, k: u32) -> FPoly {
        let mut s = vec![0; self.nvars];
        s[v] = k;
        self.shift_up(&s)
    }

    /// Exact division, `None` when `d` does not divide `self`.
    pub(crate) fn div_exact(&self, d: &FPoly) -> Option<FPoly> {
        if d.is_zero() {
            return None;
        }
        let mut r = self.clone();
        let mut q: BTreeMap<Exps, Q> = BTreeMap::new();
        let (de, dc) = &d.terms[0];
        while !r.is_zero() {
            let (re, rc) = &r.terms[0];
            if re.iter().zip(de).any(|(a, b)| a < b) {
                return None;
            }
            let e: Exps = re.iter().zip(de).map(|(a, b)| a - b).collect();
            let c = rc / dc;
            let t = FPoly { nvars: self.nvars, terms: vec![(e.clone(), c.clone())] };
            r = r.sub(&t.mul(d));
            *q.entry(e).or_insert_with(Q::zero) += c;
        }
        Some(FPoly::from_map(self.nvars, q))
    }

    fn prem(&self, b: &FPoly, v: usize) -> FPoly {
        let db = b.deg(v);
        let lb = b.lc_in(v);
        let mut r = self.clone();
        while !r.is_zero() && r.deg(v) >= db {
            let dr = r.deg(v);
            let lr = r.lc_in(v);
            r = r.mul(&lb).sub(&lr.times_var(v, dr - db).mul(b));
        }
        r
    }

    fn uses(&self) -> Vec<bool> {
        let mut u = vec![false; self.nvars];
        for (e, _) in &self.terms {
            for (f, &k) in u.iter_mut().zip(e) {
                *f |= k > 0;
            }
        }
        u
    }

    /// Coefficients with respect to the variables `vs` jointly.
    fn coeffs_in_vars(&self, vs: &[usize]) -> Vec<FPoly> {
        let mut out: BTreeMap<Exps, BTreeMap<Exps, Q>> = BTreeMap::new();
        for (e, c) in &self.terms {
            let key: Exps = vs.iter().map(|&v| e[v]).collect();
            let mut e2 = e.clone();
            for &v in vs {
                e2[v] = 0;
            }
            out.entry(key).or_default().insert(e2, c.clone());
        }
        out.into_values().map(|m| FPoly::from_map(self.nvars, m)).collect()
    }

    fn content_in(&self, v: usize) -> FPoly {
        let mut g: Option<FPoly> = None;
        for (_, c) in self.coeffs_in(v) {
            g = Some(match g {
                None => c.monic(),
                Some(g) => gcd(&g, &c),
            });
            if g.as_ref().map(|g| g.is_constant()).unwrap_or(false) {
                break;
            }
        }
        g.unwrap_or_else(|| FPoly::constant(self.nvars, Q::one()))
    }
}

/// Monic gcd (leading coefficient 1 in lex order).
pub(crate) fn gcd(a: &FPoly, b: &FPoly) -> FPoly {
    let n = a.nvars;
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return FPoly::constant(n, Q::one());
    }
    // a variable only one side uses cannot occur in the gcd
    let (ua, ub) = (a.uses(), b.uses());
    for (x, y, ux, uy) in [(a, b, &ua, &ub), (b, a, &ub, &ua)] {
        let only: Vec<usize> = (0..n).filter(|&v| ux[v] && !uy[v]).collect();
        if !only.is_empty() {
            let mut cs = x.coeffs_in_vars(&only);
            cs.sort_by_key(|c| c.terms.len());
            let mut g = y.monic();
            for c in cs {
                g = gcd(&c, &g);
                if g.is_constant() {
                    break;
                }
            }
            return g;
        }
    }
    let ma = a.min_exps();
    let mb = b.min_exps();
    let mg: Exps = ma.iter().zip(&mb).map(|(x, y)| *x.min(y)).collect();
    let a1 = a.shift_down(&ma);
    let b1 = b.shift_down(&mb);
    let unit = FPoly::constant(n, Q::one());
    let core = if a1.is_constant() || b1.is_constant() {
        unit
    } else {
        let v = (0..n).find(|&v| a1.deg(v) > 0 || b1.deg(v) > 0).expect("nonconstant");
        let (da, db) = (a1.deg(v), b1.deg(v));
        if da == 0 {
            gcd(&b1.content_in(v), &a1)
        } else if db == 0 {
            gcd(&a1.content_in(v), &b1)
        } else {
            let ca = a1.content_in(v);
            let cb = b1.content_in(v);
            let gc = gcd(&ca, &cb);
            let mut r0 = a1.div_exact(&ca).expect("content divides");
            let mut r1 = b1.div_exact(&cb).expect("content divides");
            if r0.deg(v) < r1.deg(v) {
                std::mem::swap(&mut r0, &mut r1);
            }
            loop {
                let r = r0.prem(&r1, v);
                if r.is_zero() {
                    break;
                }
                if r.deg(v) == 0 {
                    r1 = FPoly::constant(n, Q::one());
                    break;
                }
                let c = r.content_in(v);
                r0 = r1;
                r1 = r.div_exact(&c).expect("content divides").monic();
            }
            gc.mul(&r1)
        }
    };
    core.shift_up(&mg).monic()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: usize, t: &[(&[u32], i64)]) -> FPoly {
        let mut m = BTreeMap::new();
        for (e, c) in t {
            m.insert(e.to_vec(), Q::from_integer((*c).into()));
        }
        FPoly::from_map(n, m)
    }

    #[test]
    fn gcd_of_difference_of_squares() {
        // x^2 - y^2 and x^2 + 2xy + y^2 share x + y
        let a = p(2, &[(&[2, 0], 1), (&[0, 2], -1)]);
        let b = p(2, &[(&[2, 0], 1), (&[1, 1], 2), (&[0, 2], 1)]);
        let g = gcd(&a, &b);
        assert_eq!(g, p(2, &[(&[1, 0], 1), (&[0, 1], 1)]));
        assert!(a.div_exact(&g).is_some());
    }

    #[test]
    fn coprime_is_one() {
        let a = p(2, &[(&[1, 0], 1), (&[0, 0], 1)]);
        let b = p(2, &[(&[0, 1], 1), (&[0, 0], 1)]);
        assert_eq!(gcd(&a, &b), FPoly::constant(2, Q::one()));
    }

    #[test]
    fn monomial_content() {
        let a = p(2, &[(&[2, 1], 3)]);
        let b = p(2, &[(&[1, 3], 6), (&[3, 1], 2)]);
        assert_eq!(gcd(&a, &b), p(2, &[(&[1, 1], 1)]));
    }
}
