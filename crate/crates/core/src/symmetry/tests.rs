use super::*;
use crate::geometry::{Metric, Role};

fn laplace2() -> QuasilinearSystem {
    let x = vec![Symbol::coord("x"), Symbol::coord("y")];
    let u = vec![Symbol::field("u")];
    let g = Metric::diagonal(x, vec![Expr::one(), Expr::one()], Role::Base).unwrap();
    let h = Metric::diagonal(u, vec![Expr::one()], Role::Field).unwrap();
    euler_lagrange(g, h, Expr::zero()).unwrap()
}

fn sym(s: &QuasilinearSystem) -> (Expr, Expr, Expr) {
    (s.x()[0].expr(), s.x()[1].expr(), s.u()[0].expr())
}

#[test]
fn equations_of_laplace() {
    let s = laplace2();
    let p = s.equations();
    assert_eq!(p[0], s.jets.u2(0, 0, 0) + s.jets.u2(0, 1, 1));
    assert_eq!(s.jets.u2(0, 1, 0).to_string(), "u_xy");
}

#[test]
fn prolongation_examples() {
    let s = laplace2();
    let (x, _, u) = sym(&s);
    let j = &s.jets;
    let t = Generator::new(vec![Expr::one(), Expr::zero()], vec![Expr::zero()], "dx").unwrap();
    let pr = prolong(&t, &s);
    assert!(pr.first.iter().flatten().chain(pr.second.iter().flatten().flatten()).all(|e| e.is_zero()));
    let sc = Generator::new(vec![Expr::zero(), Expr::zero()], vec![u.clone()], "u du").unwrap();
    let pr = prolong(&sc, &s);
    assert_eq!(pr.first[0][1], j.u1(0, 1));
    assert_eq!(pr.second[0][0][1], j.u2(0, 0, 1));
    let d = Generator::new(vec![x, Expr::zero()], vec![Expr::zero()], "x dx").unwrap();
    let pr = prolong(&d, &s);
    assert_eq!(pr.first[0][0], -j.u1(0, 0));
    assert!(pr.first[0][1].is_zero());
    assert_eq!(pr.second[0][0][0], j.u2(0, 0, 0) * -2);
    assert_eq!(pr.second[0][0][1], -j.u2(0, 0, 1));
}

#[test]
fn prolongation_matches_characteristic_route() {
    // η_ij = D_iD_j(η - ξ^k u_k) + ξ^k u_ijk
    let s = laplace2();
    let (x, y, u) = sym(&s);
    let j = &s.jets;
    let g = Generator::new(vec![&x * &y, &x * &x - &y], vec![&u * &x + &y * &y], "g").unwrap();
    let pr = prolong(&g, &s);
    let q = &g.eta[0] - (0..2).map(|k| &g.xi[k] * &j.u1(0, k)).sum::<Expr>();
    for a in 0..2 {
        let e1 = j.total(&q, a) + (0..2).map(|k| &g.xi[k] * &j.u2(0, a, k)).sum::<Expr>();
        assert_eq!(pr.first[0][a], e1);
        for b in 0..2 {
            let e2 = j.total(&j.total(&q, a), b) + (0..2).map(|k| &g.xi[k] * &j.jet_expr(0, &[a, b, k])).sum::<Expr>();
            assert_eq!(pr.second[0][a][b], e2);
        }
    }
}

#[test]
fn lie_checks_on_laplace() {
    let s = laplace2();
    let (x, y, u) = sym(&s);
    let z = Expr::zero();
    let dil = Generator::new(vec![x.clone(), y.clone()], vec![z.clone()], "dilation").unwrap();
    let r = check_lie_condition(&s, &dil);
    assert!(r.verdict);
    assert_eq!(r.kappa[0][0], Expr::int(-2));
    let rot = Generator::new(vec![y.clone(), -x.clone()], vec![z.clone()], "rot").unwrap();
    assert!(check_lie_condition(&s, &rot).verdict);
    let sc = Generator::new(vec![z.clone(), z.clone()], vec![u.clone()], "scale").unwrap();
    assert!(check_lie_condition(&s, &sc).verdict);
    let bad = Generator::new(vec![z.clone(), z.clone()], vec![&u * &u], "u^2").unwrap();
    let r = check_lie_condition(&s, &bad);
    assert!(!r.verdict);
    assert!(!r.residual.is_empty());
    let udep = Generator::new_unchecked(vec![u.clone(), z.clone()], vec![z.clone()], "u dx");
    assert!(!check_lie_condition(&s, &udep).verdict);
    assert_eq!(Generator::new(vec![u, z.clone()], vec![z], "u dx").unwrap_err(), SymmetryError::XiDependsOnU);
    // rescaling and sums
    assert!(check_lie_condition(&s, &dil.scale(&Expr::frac(-3, 7))).verdict);
    assert!(check_lie_condition(&s, &dil.add(&rot)).verdict);
}

#[test]
fn noether_on_laplace() {
    let s = laplace2();
    let (x, y, u) = sym(&s);
    let z = Expr::zero();
    let dx = Generator::new(vec![Expr::one(), z.clone()], vec![z.clone()], "dx").unwrap();
    let r = check_noether_condition(&s, &dx).unwrap();
    assert!(r.is_noether());
    assert_eq!(r.gauge.clone().unwrap(), vec![z.clone(), z.clone()]);
    let c = conservation_current(&s, &dx, &r.gauge.unwrap()).unwrap();
    assert!(check_on_shell_divergence(&s, &c));
    // energy current equals the Hamiltonian tensor column
    let ht = s.hamiltonian_tensor().unwrap();
    assert_eq!(c.i[0], ht[0][0]);
    assert_eq!(c.i[1], ht[1][0]);
    let mut bad = c.clone();
    bad.i[0] = &bad.i[0] + &(s.jets.u1(0, 0) * s.jets.u1(0, 0) / Expr::int(2));
    assert!(!check_on_shell_divergence(&s, &bad));
    let sc = Generator::new(vec![z.clone(), z.clone()], vec![u.clone()], "scale").unwrap();
    assert_eq!(check_noether_condition(&s, &sc).unwrap().verdict, NoetherVerdict::NotNoether);
    // in two dimensions the dilation is variational
    let dil = Generator::new(vec![x.clone(), y.clone()], vec![z.clone()], "dilation").unwrap();
    assert!(check_noether_condition(&s, &dil).unwrap().is_noether());
    let zero = Generator::zero(2, 1);
    let r = check_noether_condition(&s, &zero).unwrap();
    assert!(r.is_noether());
    let c = conservation_current(&s, &zero, &r.gauge.unwrap()).unwrap();
    assert!(c.i.iter().all(|e| e.is_zero()));
    assert!(check_on_shell_divergence(&s, &c));
    // Galilean-like shift x du: gauge A^x = u
    let g = Generator::new(vec![z.clone(), z.clone()], vec![x.clone()], "x du").unwrap();
    let r = check_noether_condition(&s, &g).unwrap();
    assert!(r.is_noether());
    assert_eq!(r.gauge.clone().unwrap()[0], u);
    assert!(verify_noether_gauge(&s, &g, &r.gauge.clone().unwrap()).unwrap());
    let c = conservation_current(&s, &g, &r.gauge.unwrap()).unwrap();
    assert!(check_on_shell_divergence(&s, &c));
}

#[test]
fn auxiliary_family() {
    let s = laplace2().with_aux("b");
    let b = s.jets.aux()[0].expr();
    let z = Expr::zero();
    let g = Generator::new(vec![z.clone(), z], vec![b], "b du").unwrap();
    assert!(check_lie_condition(&s, &g).verdict);
    let r = check_noether_condition(&s, &g).unwrap();
    assert!(r.is_noether(), "{:?}", r);
    let c = conservation_current(&s, &g, &r.gauge.unwrap()).unwrap();
    assert!(check_on_shell_divergence(&s, &c));
}

#[test]
fn variational_mismatch_detected() {
    let s = laplace2();
    let l = s.lagrangian().unwrap();
    let e = s.variational_derivative(&l);
    assert_eq!(e[0], -s.equations()[0].clone());
}
