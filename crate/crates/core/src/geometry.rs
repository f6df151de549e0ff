//! Metrics, Levi-Civita connections, Lie derivatives and curvature in
//! coordinates. Signature plays no role anywhere.

use std::sync::OnceLock;

use num_traits::Signed;
use thiserror::Error;

use crate::expr::{Expr, Symbol, ZeroTest};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("metric is degenerate")]
    Degenerate,
    #[error("metric is not symmetric at ({0}, {1})")]
    Asymmetric(usize, usize),
    #[error("expected {expected} components, got {got}")]
    Dimension { expected: usize, got: usize },
}

/// Which space a metric lives on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Role {
    /// `g_ij(x)` on the independent variables.
    Base,
    /// `H_AB(u)` on the dependent variables.
    Field,
}

#[derive(Clone, Debug)]
pub struct Metric {
    coords: Vec<Symbol>,
    g: Vec<Vec<Expr>>,
    role: Role,
    inv: OnceLock<Vec<Vec<Expr>>>,
    gamma: OnceLock<Connection>,
}

/// Christoffel symbols `Γ^a_bc`, symmetric in the lower pair.
#[derive(Clone, Debug, PartialEq)]
pub struct Connection {
    pub coords: Vec<Symbol>,
    pub gamma: Vec<Vec<Vec<Expr>>>,
}

/// A vector field in components over a coordinate list.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VField {
    pub coords: Vec<Symbol>,
    pub comps: Vec<Expr>,
}

pub fn determinant(m: &[Vec<Expr>]) -> Expr {
    let n = m.len();
    match n {
        0 => Expr::one(),
        1 => m[0][0].clone(),
        2 => &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0],
        _ => {
            let mut acc = Vec::new();
            for j in 0..n {
                if m[0][j].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<Expr>> =
                    (1..n).map(|i| (0..n).filter(|&k| k != j).map(|k| m[i][k].clone()).collect()).collect();
                let t = &m[0][j] * &determinant(&minor);
                acc.push(if j % 2 == 0 { t } else { -t });
            }
            acc.into_iter().sum()
        }
    }
}

fn cofactor_inverse(m: &[Vec<Expr>], det: &Expr) -> Vec<Vec<Expr>> {
    let n = m.len();
    if n == 1 {
        return vec![vec![det.recip()]];
    }
    let dinv = det.recip();
    let mut out = vec![vec![Expr::zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            let minor: Vec<Vec<Expr>> = (0..n)
                .filter(|&r| r != j)
                .map(|r| (0..n).filter(|&c| c != i).map(|c| m[r][c].clone()).collect())
                .collect();
            let c = determinant(&minor) * &dinv;
            out[i][j] = if (i + j) % 2 == 0 { c } else { -c };
        }
    }
    out
}

impl Metric {
    pub fn new(coords: Vec<Symbol>, g: Vec<Vec<Expr>>, role: Role) -> Result<Metric, GeometryError> {
        let n = coords.len();
        if g.len() != n {
            return Err(GeometryError::Dimension { expected: n, got: g.len() });
        }
        for row in &g {
            if row.len() != n {
                return Err(GeometryError::Dimension { expected: n, got: row.len() });
            }
        }
        for a in 0..n {
            for b in a + 1..n {
                if g[a][b] != g[b][a] {
                    return Err(GeometryError::Asymmetric(a, b));
                }
            }
        }
        let det = determinant(&g);
        if ZeroTest::default().is_zero(&det) {
            return Err(GeometryError::Degenerate);
        }
        Ok(Metric { coords, g, role, inv: OnceLock::new(), gamma: OnceLock::new() })
    }

    /// Diagonal metric.
    pub fn diagonal(coords: Vec<Symbol>, diag: Vec<Expr>, role: Role) -> Result<Metric, GeometryError> {
        let n = diag.len();
        let g = (0..n).map(|i| (0..n).map(|j| if i == j { diag[i].clone() } else { Expr::zero() }).collect()).collect();
        Metric::new(coords, g, role)
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Symbol] {
        &self.coords
    }

    pub fn role(&self) -> Role {
        self.role
    }

    pub fn components(&self) -> &[Vec<Expr>] {
        &self.g
    }

    pub fn at(&self, a: usize, b: usize) -> &Expr {
        &self.g[a][b]
    }

    pub fn det(&self) -> Expr {
        determinant(&self.g)
    }

    /// `sqrt(|det g|)`; the sign of the determinant is read off numerically.
    pub fn sqrt_abs_det(&self) -> Expr {
        let d = self.det();
        let neg = match d.as_rational() {
            Some(q) => q.is_negative(),
            None => {
                let b = sample_point(&d);
                d.eval_float(&b, 20).map(|v| v.is_negative()).unwrap_or(false)
            }
        };
        if neg {
            (-d).sqrt()
        } else {
            d.sqrt()
        }
    }

    pub fn inverse_components(&self) -> &[Vec<Expr>] {
        self.inv.get_or_init(|| {
            let n = self.dim();
            let diag = (0..n).all(|a| (0..n).all(|b| a == b || self.g[a][b].is_zero()));
            if diag {
                return (0..n)
                    .map(|a| (0..n).map(|b| if a == b { self.g[a][a].recip() } else { Expr::zero() }).collect())
                    .collect();
            }
            cofactor_inverse(&self.g, &self.det())
        })
    }

    pub fn inverse(&self) -> Metric {
        Metric {
            coords: self.coords.clone(),
            g: self.inverse_components().to_vec(),
            role: self.role,
            inv: OnceLock::new(),
            gamma: OnceLock::new(),
        }
    }

    pub fn christoffel(&self) -> &Connection {
        self.gamma.get_or_init(|| {
            let n = self.dim();
            let gi = self.inverse_components();
            let dg: Vec<Vec<Vec<Expr>>> = (0..n)
                .map(|a| (0..n).map(|b| self.coords.iter().map(|c| self.g[a][b].diff(c)).collect()).collect())
                .collect();
            let mut gamma = vec![vec![vec![Expr::zero(); n]; n]; n];
            for a in 0..n {
                for b in 0..n {
                    for c in b..n {
                        let s: Expr = (0..n)
                            .filter(|&d| !gi[a][d].is_zero())
                            .map(|d| &gi[a][d] * &(&dg[d][b][c] + &dg[d][c][b] - &dg[b][c][d]))
                            .sum();
                        let v = s * Expr::frac(1, 2);
                        gamma[a][b][c] = v.clone();
                        gamma[a][c][b] = v;
                    }
                }
            }
            Connection { coords: self.coords.clone(), gamma }
        })
    }

    /// `Γ^a = g^{bc} Γ^a_bc`.
    pub fn contracted_christoffel(&self) -> VField {
        let n = self.dim();
        let gi = self.inverse_components();
        let gam = &self.christoffel().gamma;
        let comps = (0..n)
            .map(|a| {
                let mut terms = Vec::new();
                for b in 0..n {
                    for c in 0..n {
                        if !gi[b][c].is_zero() && !gam[a][b][c].is_zero() {
                            terms.push(&gi[b][c] * &gam[a][b][c]);
                        }
                    }
                }
                terms.into_iter().sum()
            })
            .collect();
        VField { coords: self.coords.clone(), comps }
    }

    /// `(L_v g)_ab = v^c g_ab,c + g_cb v^c_,a + g_ac v^c_,b`.
    pub fn lie_derivative_metric(&self, v: &VField) -> Vec<Vec<Expr>> {
        let n = self.dim();
        let dv: Vec<Vec<Expr>> = v.comps.iter().map(|vc| self.coords.iter().map(|x| vc.diff(x)).collect()).collect();
        let mut out = vec![vec![Expr::zero(); n]; n];
        for a in 0..n {
            for b in a..n {
                let mut t = Vec::new();
                for c in 0..n {
                    let gab_c = self.g[a][b].diff(&self.coords[c]);
                    if !gab_c.is_zero() {
                        t.push(&v.comps[c] * &gab_c);
                    }
                    if !self.g[c][b].is_zero() && !dv[c][a].is_zero() {
                        t.push(&self.g[c][b] * &dv[c][a]);
                    }
                    if !self.g[a][c].is_zero() && !dv[c][b].is_zero() {
                        t.push(&self.g[a][c] * &dv[c][b]);
                    }
                }
                let s: Expr = t.into_iter().sum();
                out[a][b] = s.clone();
                out[b][a] = s;
            }
        }
        out
    }

    /// `L_v Γ^a_bc = v^a_,bc + v^d Γ^a_bc,d + Γ^a_dc v^d_,b + Γ^a_bd v^d_,c - Γ^d_bc v^a_,d`.
    pub fn lie_derivative_connection(&self, v: &VField) -> Vec<Vec<Vec<Expr>>> {
        let n = self.dim();
        let x = &self.coords;
        let gam = &self.christoffel().gamma;
        let dv: Vec<Vec<Expr>> = v.comps.iter().map(|vc| x.iter().map(|s| vc.diff(s)).collect()).collect();
        let mut out = vec![vec![vec![Expr::zero(); n]; n]; n];
        for a in 0..n {
            for b in 0..n {
                for c in b..n {
                    let mut t = vec![dv[a][b].diff(&x[c])];
                    for d in 0..n {
                        let gd = gam[a][b][c].diff(&x[d]);
                        if !gd.is_zero() {
                            t.push(&v.comps[d] * &gd);
                        }
                        if !gam[a][d][c].is_zero() {
                            t.push(&gam[a][d][c] * &dv[d][b]);
                        }
                        if !gam[a][b][d].is_zero() {
                            t.push(&gam[a][b][d] * &dv[d][c]);
                        }
                        if !gam[d][b][c].is_zero() {
                            t.push(-(&gam[d][b][c] * &dv[a][d]));
                        }
                    }
                    let s: Expr = t.into_iter().sum();
                    out[a][b][c] = s.clone();
                    out[a][c][b] = s;
                }
            }
        }
        out
    }

    /// `Δ f = g^ab (f_,ab - Γ^c_ab f_,c)`.
    pub fn laplacian(&self, f: &Expr) -> Expr {
        let n = self.dim();
        let gi = self.inverse_components();
        let df: Vec<Expr> = self.coords.iter().map(|s| f.diff(s)).collect();
        let gc = self.contracted_christoffel();
        let mut t = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if !gi[a][b].is_zero() {
                    t.push(&gi[a][b] * &df[a].diff(&self.coords[b]));
                }
            }
            if !gc.comps[a].is_zero() {
                t.push(-(&gc.comps[a] * &df[a]));
            }
        }
        t.into_iter().sum()
    }

    /// Ricci tensor `R_bd = R^a_bad` with
    /// `R^a_bcd = Γ^a_db,c - Γ^a_cb,d + Γ^a_ce Γ^e_db - Γ^a_de Γ^e_cb`.
    pub fn ricci(&self) -> Vec<Vec<Expr>> {
        let n = self.dim();
        let x = &self.coords;
        let g = &self.christoffel().gamma;
        let mut out = vec![vec![Expr::zero(); n]; n];
        for b in 0..n {
            for d in b..n {
                let mut t = Vec::new();
                for a in 0..n {
                    // c = a
                    t.push(g[a][d][b].diff(&x[a]));
                    t.push(-g[a][a][b].diff(&x[d]));
                    for e in 0..n {
                        t.push(&g[a][a][e] * &g[e][d][b]);
                        t.push(-(&g[a][d][e] * &g[e][a][b]));
                    }
                }
                let s: Expr = t.into_iter().sum();
                out[b][d] = s.clone();
                out[d][b] = s;
            }
        }
        out
    }

    pub fn ricci_scalar(&self) -> Expr {
        let n = self.dim();
        let gi = self.inverse_components();
        let r = self.ricci();
        let mut t = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if !gi[a][b].is_zero() {
                    t.push(&gi[a][b] * &r[a][b]);
                }
            }
        }
        t.into_iter().sum()
    }

    /// Covariant derivative `g_ab;c`; zero for the Levi-Civita connection.
    pub fn metric_covariant_derivative(&self) -> Vec<Vec<Vec<Expr>>> {
        let n = self.dim();
        let gam = &self.christoffel().gamma;
        (0..n)
            .map(|a| {
                (0..n)
                    .map(|b| {
                        (0..n)
                            .map(|c| {
                                let mut t = vec![self.g[a][b].diff(&self.coords[c])];
                                for d in 0..n {
                                    t.push(-(&gam[d][c][a] * &self.g[d][b]));
                                    t.push(-(&gam[d][c][b] * &self.g[a][d]));
                                }
                                t.into_iter().sum()
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect()
    }

    /// Lower the index of a vector field: `v_a = g_ab v^b`.
    pub fn lower(&self, v: &VField) -> Vec<Expr> {
        let n = self.dim();
        (0..n)
            .map(|a| (0..n).filter(|&b| !self.g[a][b].is_zero()).map(|b| &self.g[a][b] * &v.comps[b]).sum())
            .collect()
    }
}

fn sample_point(e: &Expr) -> crate::expr::Bindings {
    let mut b = crate::expr::Bindings::new();
    for (i, s) in e.symbols().iter().enumerate() {
        b.set_exact(s.name(), crate::expr::Q::new((3 + 2 * i as i64).into(), 7.into()));
    }
    b
}

impl VField {
    pub fn new(coords: Vec<Symbol>, comps: Vec<Expr>) -> VField {
        assert_eq!(coords.len(), comps.len(), "vector field dimension");
        VField { coords, comps }
    }

    pub fn zero(coords: &[Symbol]) -> VField {
        VField { coords: coords.to_vec(), comps: vec![Expr::zero(); coords.len()] }
    }

    /// Coordinate basis field `∂_i`.
    pub fn basis(coords: &[Symbol], i: usize) -> VField {
        let mut v = VField::zero(coords);
        v.comps[i] = Expr::one();
        v
    }

    pub fn dim(&self) -> usize {
        self.comps.len()
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, o: &VField) -> VField {
        VField { coords: self.coords.clone(), comps: self.comps.iter().zip(&o.comps).map(|(a, b)| a + b).collect() }
    }

    pub fn scale(&self, k: &Expr) -> VField {
        VField { coords: self.coords.clone(), comps: self.comps.iter().map(|a| a * k).collect() }
    }

    /// `v(f) = v^a ∂_a f`.
    pub fn apply(&self, f: &Expr) -> Expr {
        self.comps
            .iter()
            .zip(&self.coords)
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, s)| c * &f.diff(s))
            .sum()
    }

    /// Lie bracket `[self, o]`.
    pub fn bracket(&self, o: &VField) -> VField {
        let comps = (0..self.dim()).map(|a| self.apply(&o.comps[a]) - o.apply(&self.comps[a])).collect();
        VField { coords: self.coords.clone(), comps }
    }

    /// Divergence with respect to a metric: `v^a_;a`.
    pub fn divergence(&self, m: &Metric) -> Expr {
        let gc = &m.christoffel().gamma;
        let n = self.dim();
        let mut t = Vec::new();
        for a in 0..n {
            t.push(self.comps[a].diff(&self.coords[a]));
            for d in 0..n {
                if !gc[a][a][d].is_zero() {
                    t.push(&gc[a][a][d] * &self.comps[d]);
                }
            }
        }
        t.into_iter().sum()
    }
}
