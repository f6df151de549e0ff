mod common;

use collineate::cases::{euclidean, flat_field_metric, hyperbolic_plane};
use collineate::collineations::*;
use collineate::expr::{Expr, ZeroTest};
use collineate::geometry::{Metric, VField};
use common::in_span;

fn zero_all<'a>(es: impl IntoIterator<Item = &'a Expr>) -> bool {
    let z = ZeroTest::default();
    es.into_iter().all(|e| z.is_zero(e))
}

fn is_ac(m: &Metric, v: &VField) -> bool {
    zero_all(m.lie_derivative_connection(v).iter().flatten().flatten())
}

#[test]
fn elements_satisfy_their_equations() {
    let g = euclidean(3).unwrap();
    let a = AnsatzSpec::monomials(g.coords().to_vec(), 2).unwrap();
    let ckv = solve_ckv(&g, &a).unwrap();
    for c in &ckv.fields {
        let l = g.lie_derivative_metric(&c.field);
        let res: Vec<Expr> = l.iter().flatten().zip(g.components().iter().flatten()).map(|(x, m)| x - &(&c.psi * m * 2)).collect();
        assert!(zero_all(&res));
    }
    let kv = kv_from_ckv(&ckv, &g, &a);
    let hv = hv_from_ckv(&ckv, &g, &a);
    let ac = solve_affine(&g, &a).unwrap().vector_fields();
    let ckv_fields = ckv.vector_fields();
    for v in kv.vector_fields().iter().chain(hv.vector_fields().iter()) {
        assert!(in_span(&ckv_fields, v));
        assert!(in_span(&ac, v));
        assert!(is_ac(&g, v));
    }
    // special conformal fields have nonconstant psi and are not affine
    let proper: Vec<&Collineation> = ckv.fields.iter().filter(|c| c.psi.as_rational().is_none()).collect();
    assert_eq!(proper.len(), 3);
    for c in proper {
        assert!(!is_ac(&g, &c.field));
    }
}

#[test]
fn larger_ansatz_never_loses_elements() {
    let g = euclidean(3).unwrap();
    let dims: Vec<usize> = (1..=3)
        .map(|d| solve_ckv(&g, &AnsatzSpec::monomials(g.coords().to_vec(), d).unwrap()).unwrap().dim())
        .collect();
    assert!(dims.windows(2).all(|w| w[0] <= w[1]), "{dims:?}");
    assert_eq!(dims[1], 10);
    assert_eq!(known_max(Kind::Ckv, 3), Some(10));
}

#[test]
fn hyperbolic_affine_equals_killing() {
    let m = hyperbolic_plane();
    let a = AnsatzSpec::default_for(&m).unwrap();
    let ac = solve_affine(&m, &a).unwrap();
    let kv = solve_kv(&m, &a).unwrap();
    assert_eq!(ac.dim(), 3);
    assert_eq!(kv.dim(), 3);
    let kvs = kv.vector_fields();
    assert!(ac.vector_fields().iter().all(|v| in_span(&kvs, v)));
}

#[test]
fn killing_tensors_contain_metric_and_products() {
    let m = euclidean(2).unwrap();
    let a = AnsatzSpec::monomials(m.coords().to_vec(), 2).unwrap();
    let kt = solve_killing_tensor2(&m, &a).unwrap();
    assert_eq!(kt.dim(), 6);
    let (x, y) = (m.coords()[0].expr(), m.coords()[1].expr());
    // rotation (y, -x) with itself, lowered: [[y^2, -xy], [-xy, x^2]]
    let t = vec![vec![&y * &y, -(&x * &y)], vec![-(&x * &y), &x * &x]];
    assert!(zero_all(&killing_tensor_residual(&m, &t)));
    assert!(zero_all(&killing_tensor_residual(&m, m.components())));
    let bad = vec![vec![&x * &x, Expr::zero()], vec![Expr::zero(), Expr::zero()]];
    assert!(!zero_all(&killing_tensor_residual(&m, &bad)));
}

#[test]
fn gradient_flags_on_flat_space() {
    let h = flat_field_metric(3).unwrap();
    let a = AnsatzSpec::monomials(h.coords().to_vec(), 1).unwrap();
    let kv = solve_kv(&h, &a).unwrap();
    let grads = kv.fields.iter().filter(|c| c.gradient.is_gradient()).count();
    assert_eq!((kv.dim(), grads), (6, 3));
    let hv = solve_hv(&h, &a).unwrap();
    assert_eq!(hv.dim(), 1);
    assert!(hv.fields[0].gradient.is_gradient());
}
