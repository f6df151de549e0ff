use super::*;
use crate::expr::SymbolClass;
use crate::geometry::Role;

fn coords(names: &[&str]) -> Vec<Symbol> {
    names.iter().map(|n| Symbol::coord(n)).collect()
}

fn euclid(n: usize) -> Metric {
    let names = ["x", "y", "z", "w"];
    Metric::diagonal(coords(&names[..n]), vec![Expr::one(); n], Role::Base).unwrap()
}

fn flat_field(m: usize) -> Metric {
    let u: Vec<Symbol> = (1..=m).map(|i| Symbol::new(&format!("u{i}"), SymbolClass::CoordU)).collect();
    Metric::diagonal(u, vec![Expr::one(); m], Role::Field).unwrap()
}

fn hyperbolic() -> Metric {
    let x = coords(&["theta", "phi"]);
    let t = x[0].expr();
    Metric::diagonal(x, vec![Expr::one(), -(t * 2).exp()], Role::Field).unwrap()
}

#[test]
fn euclidean_three() {
    let m = euclid(3);
    let a = AnsatzSpec::monomials(m.coords().to_vec(), 2).unwrap();
    let ckv = solve_ckv(&m, &a).unwrap();
    assert_eq!(ckv.dim(), 10);
    assert!(ckv.complete);
    assert!(!ckv.infinite_conformal);
    let kv = kv_from_ckv(&ckv, &m, &a);
    assert_eq!(kv.dim(), 6);
    assert!(kv.fields.iter().all(|c| c.psi.is_zero()));
    let hv = hv_from_ckv(&ckv, &m, &a);
    assert_eq!(hv.dim(), 1);
    assert_eq!(hv.fields[0].psi, Expr::one());
    // proper HV is the radial field
    let x: Vec<Expr> = m.coords().iter().map(|s| s.expr()).collect();
    assert_eq!(hv.fields[0].field.comps, x);
}

#[test]
fn euclidean_four() {
    let m = euclid(4);
    let a = AnsatzSpec::monomials(m.coords().to_vec(), 2).unwrap();
    let ckv = solve_ckv(&m, &a).unwrap();
    assert_eq!(ckv.dim(), 15);
    assert_eq!(kv_from_ckv(&ckv, &m, &a).dim(), 10);
}

#[test]
fn flat_plane_is_infinite_conformal() {
    let m = euclid(2);
    let a = AnsatzSpec::monomials(m.coords().to_vec(), 2).unwrap();
    let ckv = solve_ckv(&m, &a).unwrap();
    assert!(ckv.infinite_conformal);
    assert_eq!(ckv.known_max, None);
    assert!(!ckv.complete);
    // holomorphic fields up to degree 2: 1, z, z^2 with complex coefficients
    assert_eq!(ckv.dim(), 6);
}

#[test]
fn hyperbolic_killing_vectors() {
    let m = hyperbolic();
    let (t, p) = (m.coords()[0].expr(), m.coords()[1].expr());
    let basis = vec![Expr::one(), p.clone(), &p * &p, (&t * -2).exp()];
    let a = AnsatzSpec::with_basis(m.coords().to_vec(), basis).unwrap();
    let kv = solve_kv(&m, &a).unwrap();
    assert_eq!(kv.dim(), 3);
    assert!(kv.complete);
    let expected = [
        VField::new(m.coords().to_vec(), vec![Expr::zero(), Expr::one()]),
        VField::new(m.coords().to_vec(), vec![Expr::one(), -p.clone()]),
        VField::new(m.coords().to_vec(), vec![p.clone(), -(&p * &p + (&t * -2).exp()) / Expr::int(2)]),
    ];
    for v in &expected {
        assert_eq!(conformal_factor(&m, v), Some(Expr::zero()));
    }
    for c in &kv.fields {
        assert!(!c.gradient.is_gradient());
    }
    let d = AnsatzSpec::default_for(&m).unwrap();
    assert_eq!(solve_kv(&m, &d).unwrap().dim(), 3);
    assert_eq!(solve_affine(&m, &a).unwrap().dim(), 3);
}

#[test]
fn flat_affine() {
    let m2 = flat_field(2);
    let a = AnsatzSpec::monomials(m2.coords().to_vec(), 1).unwrap();
    let ac = solve_affine(&m2, &a).unwrap();
    assert_eq!(ac.dim(), 6);
    assert!(ac.complete);
    let m1 = flat_field(1);
    let a1 = AnsatzSpec::monomials(m1.coords().to_vec(), 2).unwrap();
    assert_eq!(solve_affine(&m1, &a1).unwrap().dim(), 2);
    let m3 = flat_field(3);
    let a3 = AnsatzSpec::monomials(m3.coords().to_vec(), 2).unwrap();
    assert_eq!(solve_affine(&m3, &a3).unwrap().dim(), 12);
}

#[test]
fn gradient_classification() {
    let m = flat_field(2);
    let u: Vec<Expr> = m.coords().iter().map(|s| s.expr()).collect();
    let d1 = VField::basis(m.coords(), 0);
    assert_eq!(classify_gradient(&m, &d1), Gradient::Gradient(u[0].clone()));
    let rot = VField::new(m.coords().to_vec(), vec![u[1].clone(), -u[0].clone()]);
    assert_eq!(classify_gradient(&m, &rot), Gradient::NonGradient);
    let hv = VField::new(m.coords().to_vec(), u.clone());
    let half = (&u[0] * &u[0] + &u[1] * &u[1]) / Expr::int(2);
    assert_eq!(classify_gradient(&m, &hv), Gradient::Gradient(half));
}

#[test]
fn killing_tensors_flat_plane() {
    let m = euclid(2);
    let a = AnsatzSpec::monomials(m.coords().to_vec(), 2).unwrap();
    let kt = solve_killing_tensor2(&m, &a).unwrap();
    assert_eq!(kt.dim(), 6);
    assert!(kt.complete);
    assert!(killing_tensor_residual(&m, m.components()).iter().all(|e| e.is_zero()));
}

#[test]
fn ansatz_errors() {
    assert_eq!(AnsatzSpec::with_basis(coords(&["x"]), vec![]).unwrap_err(), CollineationError::EmptyAnsatz);
    let x = Symbol::coord("x").expr();
    let r = AnsatzSpec::with_basis(coords(&["x"]), vec![x.clone(), &x * 2]);
    assert!(matches!(r, Err(CollineationError::Dependent(_))));
    // closure adds the derivative of x^2
    let a = AnsatzSpec::with_basis(coords(&["x"]), vec![&x * &x]).unwrap();
    assert_eq!(a.len(), 3);
}
