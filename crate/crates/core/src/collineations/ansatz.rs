//! Finite function bases for the determining equations.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::CollineationError;
use crate::expr::{bits_for_digits, Atom, Bindings, Expr, Real, Symbol, Q};
use crate::geometry::Metric;

/// Rounds of automatic closure extension before giving up.
const CLOSURE_DEPTH: usize = 3;

#[derive(Clone, Debug)]
pub struct AnsatzSpec {
    coords: Vec<Symbol>,
    basis: Vec<Expr>,
    degree: u32,
    window: (i32, i32),
    extended: Vec<Expr>,
}

fn monomials(coords: &[Symbol], degree: u32) -> Vec<Expr> {
    let mut out = vec![Expr::one()];
    let mut last: Vec<(Expr, usize)> = vec![(Expr::one(), 0)];
    for _ in 0..degree {
        let mut next = Vec::new();
        for (m, from) in &last {
            for (i, x) in coords.iter().enumerate().skip(*from) {
                next.push((m * &x.expr(), i));
            }
        }
        out.extend(next.iter().map(|(m, _)| m.clone()));
        last = next;
    }
    out
}

/// Coordinate-dependent kernels of the metric: exponentials and other
/// transcendental atoms.
fn metric_kernels(m: &Metric) -> Vec<Expr> {
    let x = m.coords();
    let mut out: Vec<Expr> = Vec::new();
    let mut push = |k: Expr| {
        if !out.contains(&k) && !out.contains(&k.recip()) {
            out.push(k);
        }
    };
    for row in m.components() {
        for e in row {
            for p in [e.num_ref(), e.den_ref()] {
                for (mono, _) in &p.terms {
                    for (a, _) in &mono.factors {
                        if let Atom::Kernel(k, arg) = a {
                            if arg.depends_on_any(x) {
                                push(Expr::kernel(*k, arg));
                            }
                        }
                    }
                    if let Some(arg) = &mono.exp {
                        let dep: Expr = arg.terms().into_iter().filter(|t| t.depends_on_any(x)).sum();
                        if !dep.is_zero() {
                            push(dep.exp());
                        }
                    }
                }
            }
        }
    }
    out
}

fn sample_bindings(coords: &[Symbol], rng: &mut ChaCha8Rng) -> Bindings {
    let mut b = Bindings::new();
    for s in coords {
        let n: i64 = rng.gen_range(-300..300);
        b.set_exact(s.name(), Q::new(n.into(), 100.into()));
    }
    b
}

/// Rank test on a high-precision evaluation matrix; `Err(i)` names the
/// first dependent element.
fn check_independent(coords: &[Symbol], basis: &[Expr]) -> Result<(), usize> {
    const DIGITS: u32 = 60;
    let p = bits_for_digits(DIGITS);
    let k = basis.len();
    let mut rng = ChaCha8Rng::seed_from_u64(0xa75a);
    let mut cols: Vec<Vec<Real>> = vec![Vec::new(); k];
    for _ in 0..k + 4 {
        let b = sample_bindings(coords, &mut rng);
        for (j, f) in basis.iter().enumerate() {
            match f.eval_float(&b, DIGITS) {
                Ok(v) => cols[j].push(v),
                Err(_) => return Err(j),
            }
        }
    }
    let tol = Real::from_f64(1e-30, p);
    let dot = |a: &[Real], b: &[Real]| a.iter().zip(b).fold(Real::from_i64(0, p), |s, (x, y)| s + &(x * y));
    // modified Gram-Schmidt on columns in basis order
    let mut done: Vec<Vec<Real>> = Vec::new();
    for (j, c) in cols.into_iter().enumerate() {
        let n0 = dot(&c, &c).sqrt();
        if !n0.is_finite() || n0.is_zero() {
            return Err(j);
        }
        let mut v: Vec<Real> = c.iter().map(|a| a / &n0).collect();
        for q in &done {
            let d = dot(&v, q);
            for (a, b) in v.iter_mut().zip(q) {
                *a = &*a - &(&d * b);
            }
        }
        let n = dot(&v, &v).sqrt();
        if n < tol {
            return Err(j);
        }
        done.push(v.iter().map(|a| a / &n).collect());
    }
    Ok(())
}

fn in_span_of_one(t: &Expr, basis: &[Expr]) -> bool {
    basis.iter().any(|b| (t / b).as_rational().is_some())
}

impl AnsatzSpec {
    /// Validate an explicit basis, extending it until closed under partial
    /// derivatives.
    pub fn with_basis(coords: Vec<Symbol>, basis: Vec<Expr>) -> Result<AnsatzSpec, CollineationError> {
        Self::build(coords, basis, 0, (0, 0))
    }

    /// Monomials of degree at most `degree`.
    pub fn monomials(coords: Vec<Symbol>, degree: u32) -> Result<AnsatzSpec, CollineationError> {
        let basis = monomials(&coords, degree);
        Self::build(coords, basis, degree, (0, 0))
    }

    /// Monomials times integer powers of every kernel appearing in the metric.
    pub fn for_metric(m: &Metric, degree: u32, window: (i32, i32)) -> Result<AnsatzSpec, CollineationError> {
        let coords = m.coords().to_vec();
        let mono = monomials(&coords, degree);
        let kernels = metric_kernels(m);
        let mut combos: Vec<Vec<i32>> = vec![Vec::new()];
        for _ in &kernels {
            combos = combos
                .into_iter()
                .flat_map(|c| {
                    (window.0..=window.1).map(move |p| {
                        let mut c = c.clone();
                        c.push(p);
                        c
                    })
                })
                .collect();
        }
        combos.sort_by_key(|c| (c.iter().map(|p| p.abs()).sum::<i32>(), c.clone()));
        let mut basis: Vec<Expr> = Vec::new();
        for c in &combos {
            let k: Expr = kernels.iter().zip(c).map(|(k, p)| k.powi(*p as i64)).product();
            for mo in &mono {
                let f = mo * &k;
                if !basis.contains(&f) {
                    basis.push(f);
                }
            }
        }
        Self::build(coords, basis, degree, window)
    }

    /// Degree 2 and kernel powers in `[-2, 2]`.
    pub fn default_for(m: &Metric) -> Result<AnsatzSpec, CollineationError> {
        Self::for_metric(m, 2, (-2, 2))
    }

    fn build(coords: Vec<Symbol>, mut basis: Vec<Expr>, degree: u32, window: (i32, i32)) -> Result<AnsatzSpec, CollineationError> {
        if basis.is_empty() {
            return Err(CollineationError::EmptyAnsatz);
        }
        let mut extended = Vec::new();
        for _ in 0..CLOSURE_DEPTH {
            let mut added = Vec::new();
            for b in &basis {
                for x in &coords {
                    for t in b.diff(x).terms() {
                        if !in_span_of_one(&t, &basis) && !in_span_of_one(&t, &added) {
                            added.push(t);
                        }
                    }
                }
            }
            if added.is_empty() {
                break;
            }
            extended.extend(added.iter().cloned());
            basis.extend(added);
        }
        check_independent(&coords, &basis).map_err(|i| CollineationError::Dependent(basis[i].to_string()))?;
        Ok(AnsatzSpec { coords, basis, degree, window, extended })
    }

    pub fn coords(&self) -> &[Symbol] {
        &self.coords
    }

    pub fn basis(&self) -> &[Expr] {
        &self.basis
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn window(&self) -> (i32, i32) {
        self.window
    }

    /// Elements added to close the basis under differentiation.
    pub fn extended(&self) -> &[Expr] {
        &self.extended
    }
}
