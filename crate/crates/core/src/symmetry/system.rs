use crate::expr::{Expr, Substitution, Symbol, ZeroTest};
use crate::geometry::{Connection, Metric, VField};

use super::{JetSpace, SymmetryError};

/// `P^A = g^ij u^A_ij + g^ij C^A_BC u^B_i u^C_j - Γ^i u^A_i + F^A`.
#[derive(Clone, Debug)]
pub struct QuasilinearSystem {
    pub g: Metric,
    pub h: Metric,
    pub f: Vec<Expr>,
    pub v: Option<Expr>,
    pub jets: JetSpace,
    pub zero: ZeroTest,
    gamma: VField,
    conn: Connection,
    sqrt_g: Expr,
}

impl QuasilinearSystem {
    /// Build from a force term `F^A`. With `v` given, `F^A = H^AB V_,B` is checked.
    pub fn new(g: Metric, h: Metric, f: Vec<Expr>, v: Option<Expr>) -> Result<Self, SymmetryError> {
        if g.dim() < 2 {
            return Err(SymmetryError::BaseDimension(g.dim()));
        }
        if f.len() != h.dim() {
            return Err(SymmetryError::Dimension { expected: h.dim(), got: f.len() });
        }
        let jets = JetSpace::new(g.coords().to_vec(), h.coords().to_vec());
        let gamma = g.contracted_christoffel();
        let conn = h.christoffel().clone();
        let sqrt_g = g.sqrt_abs_det();
        let sys = QuasilinearSystem { g, h, f, v, jets, zero: ZeroTest::default(), gamma, conn, sqrt_g };
        if let Some(v) = &sys.v {
            let fv = sys.force_from_potential(v);
            for (a, b) in sys.f.iter().zip(&fv) {
                if !sys.zero.is_zero(&(a - b)) {
                    return Err(SymmetryError::InconsistentForce);
                }
            }
        }
        Ok(sys)
    }

    pub fn with_zero_test(mut self, z: ZeroTest) -> Self {
        self.zero = z;
        self
    }

    /// Add auxiliary fields `b^A(x)` mirroring the dependent fields.
    pub fn with_aux(mut self, prefix: &str) -> Self {
        let m = self.m();
        self.jets = self.jets.with_aux(prefix, m);
        self
    }

    pub fn n(&self) -> usize {
        self.g.dim()
    }

    pub fn m(&self) -> usize {
        self.h.dim()
    }

    pub fn x(&self) -> &[Symbol] {
        self.g.coords()
    }

    pub fn u(&self) -> &[Symbol] {
        self.h.coords()
    }

    /// `√|g|`.
    pub fn sqrt_g(&self) -> &Expr {
        &self.sqrt_g
    }

    /// Contracted Christoffel symbols `Γ^i = g^jk Γ^i_jk` of the base.
    pub fn gamma(&self) -> &VField {
        &self.gamma
    }

    /// Christoffel symbols `C^A_BC` of the field metric.
    pub fn connection(&self) -> &Connection {
        &self.conn
    }

    pub(crate) fn force_from_potential(&self, v: &Expr) -> Vec<Expr> {
        let hi = self.h.inverse_components();
        let dv: Vec<Expr> = self.u().iter().map(|s| v.diff(s)).collect();
        (0..self.m()).map(|a| (0..self.m()).filter(|&b| !hi[a][b].is_zero()).map(|b| &hi[a][b] * &dv[b]).sum()).collect()
    }

    /// The left-hand sides `P^A`.
    pub fn equations(&self) -> Vec<Expr> {
        (0..self.m()).map(|a| self.equation(a)).collect()
    }

    pub fn equation(&self, a: usize) -> Expr {
        let (n, m) = (self.n(), self.m());
        let gi = self.g.inverse_components();
        let c = &self.conn.gamma;
        let j = &self.jets;
        let mut t = Vec::new();
        for i in 0..n {
            for k in 0..n {
                if gi[i][k].is_zero() {
                    continue;
                }
                t.push(&gi[i][k] * &j.u2(a, i, k));
                for b in 0..m {
                    for d in 0..m {
                        if !c[a][b][d].is_zero() {
                            t.push(&gi[i][k] * &c[a][b][d] * j.u1(b, i) * j.u1(d, k));
                        }
                    }
                }
            }
            if !self.gamma.comps[i].is_zero() {
                t.push(-(&self.gamma.comps[i] * &j.u1(a, i)));
            }
        }
        t.push(self.f[a].clone());
        t.into_iter().sum()
    }

    /// Diagonal index used to solve each equation for a second jet.
    pub(crate) fn trace_index(&self) -> usize {
        let gi = self.g.inverse_components();
        (0..self.n()).find(|&p| !gi[p][p].is_zero()).expect("metric inverse has a nonzero diagonal entry")
    }

    /// On-shell replacement `u^A_pp -> u^A_pp - P^A / g^pp` for every field,
    /// and the same for auxiliary fields when present.
    pub fn on_shell(&self) -> Substitution {
        let p = self.trace_index();
        let gpp = self.g.inverse_components()[p][p].clone();
        let mut sub = Substitution::new();
        let eqs = self.equations();
        for (a, pa) in eqs.iter().enumerate() {
            sub.insert(self.jets.jet(a, &[p, p]), self.jets.u2(a, p, p) - pa / &gpp);
        }
        let m = self.m();
        if self.jets.aux().len() == m {
            let target: Vec<usize> = (m..2 * m).collect();
            for (a, pa) in eqs.iter().enumerate() {
                let pb = self.jets.relabel(pa, &target);
                sub.insert(self.jets.jet(m + a, &[p, p]), self.jets.jet_expr(m + a, &[p, p]) - pb / &gpp);
            }
        }
        sub
    }

    /// The same replacement restricted to auxiliary fields.
    pub(crate) fn aux_on_shell(&self) -> Substitution {
        let m = self.m();
        let mut sub = Substitution::new();
        if self.jets.aux().len() != m {
            return sub;
        }
        let p = self.trace_index();
        let gpp = self.g.inverse_components()[p][p].clone();
        let target: Vec<usize> = (m..2 * m).collect();
        for a in 0..m {
            let pb = self.jets.relabel(&self.equation(a), &target);
            sub.insert(self.jets.jet(m + a, &[p, p]), self.jets.jet_expr(m + a, &[p, p]) - pb / &gpp);
        }
        sub
    }

    /// `L = ½√|g| g^ij H_AB u^A_i u^B_j - √|g| V`.
    pub fn lagrangian(&self) -> Option<Expr> {
        let v = self.v.as_ref()?;
        Some(self.kinetic() - &self.sqrt_g * v)
    }

    fn kinetic(&self) -> Expr {
        let (n, m) = (self.n(), self.m());
        let gi = self.g.inverse_components();
        let h = self.h.components();
        let mut t = Vec::new();
        for i in 0..n {
            for k in 0..n {
                if gi[i][k].is_zero() {
                    continue;
                }
                for a in 0..m {
                    for b in 0..m {
                        if !h[a][b].is_zero() {
                            t.push(&gi[i][k] * &h[a][b] * self.jets.u1(a, i) * self.jets.u1(b, k));
                        }
                    }
                }
            }
        }
        t.into_iter().sum::<Expr>() * &self.sqrt_g / Expr::int(2)
    }

    /// Euler operator `∂L/∂u^A - D_i ∂L/∂u^A_i` of an arbitrary first-order Lagrangian.
    pub fn variational_derivative(&self, l: &Expr) -> Vec<Expr> {
        (0..self.m())
            .map(|a| {
                let mut e = l.diff(&self.u()[a]);
                for i in 0..self.n() {
                    let p = l.diff(&self.jets.jet(a, &[i]));
                    e = e - self.jets.total(&p, i);
                }
                e
            })
            .collect()
    }

    /// Hamiltonian tensor
    /// `H^i_k = ½√g H_AB (2 g^ij u^A_k u^B_j - δ^i_k g^rs u^A_r u^B_s) + δ^i_k √g V`.
    pub fn hamiltonian_tensor(&self) -> Option<Vec<Vec<Expr>>> {
        let v = self.v.as_ref()?;
        let (n, m) = (self.n(), self.m());
        let gi = self.g.inverse_components();
        let h = self.h.components();
        let kin = self.kinetic();
        let mut out = vec![vec![Expr::zero(); n]; n];
        for i in 0..n {
            for k in 0..n {
                let mut t = Vec::new();
                for j in 0..n {
                    if gi[i][j].is_zero() {
                        continue;
                    }
                    for a in 0..m {
                        for b in 0..m {
                            if !h[a][b].is_zero() {
                                t.push(&gi[i][j] * &h[a][b] * self.jets.u1(a, k) * self.jets.u1(b, j));
                            }
                        }
                    }
                }
                let mut e = t.into_iter().sum::<Expr>() * &self.sqrt_g;
                if i == k {
                    e = e - &kin + &self.sqrt_g * v;
                }
                out[i][k] = e;
            }
        }
        Some(out)
    }
}

/// Build the system of a Lagrangian and check it against the Euler operator:
/// `E_A(L) = -√|g| H_AB P^B`.
pub fn euler_lagrange(g: Metric, h: Metric, v: Expr) -> Result<QuasilinearSystem, SymmetryError> {
    if h.dim() == 0 {
        return Err(SymmetryError::Dimension { expected: 1, got: 0 });
    }
    let sys0 = QuasilinearSystem::new(g.clone(), h.clone(), vec![Expr::zero(); h.dim()], None)?;
    let f = sys0.force_from_potential(&v);
    let sys = QuasilinearSystem::new(g, h, f, Some(v))?;
    let l = sys.lagrangian().expect("potential set");
    let el = sys.variational_derivative(&l);
    let p = sys.equations();
    let hc = sys.h.components();
    for a in 0..sys.m() {
        let hp: Expr = (0..sys.m()).filter(|&b| !hc[a][b].is_zero()).map(|b| &hc[a][b] * &p[b]).sum();
        if !sys.zero.is_zero(&(&el[a] + &(sys.sqrt_g() * &hp))) {
            return Err(SymmetryError::VariationalMismatch(a));
        }
    }
    Ok(sys)
}
