use collineate::cases::{flat_field_metric, gup_field_metric, hyperbolic_plane, minkowski, GupParams};
use collineate::expr::{Expr, Symbol, ZeroTest};
use collineate::geometry::{Metric, Role, VField};

fn zero(e: &Expr) -> bool {
    ZeroTest::default().is_zero(e)
}

#[test]
fn inverse_of_gup_field_metric() {
    let p = GupParams::default();
    let h = gup_field_metric(&p).unwrap();
    let b2 = p.b() * 2;
    let want = [[Expr::zero(), b2.recip()], [b2.recip(), -(&b2 * &b2).recip()]];
    for a in 0..2 {
        for b in 0..2 {
            assert!(zero(&(&h.inverse_components()[a][b] - &want[a][b])));
        }
    }
}

#[test]
fn constant_metrics_have_no_connection() {
    for m in [minkowski(), gup_field_metric(&GupParams::default()).unwrap(), flat_field_metric(3).unwrap()] {
        assert!(m.christoffel().gamma.iter().flatten().flatten().all(|e| e.is_zero()));
        assert!(m.ricci_scalar().is_zero());
        assert!(m.contracted_christoffel().is_zero());
    }
}

#[test]
fn hyperbolic_operators() {
    let m = hyperbolic_plane();
    let th = m.coords()[0].expr();
    let g = m.contracted_christoffel();
    assert_eq!(g.comps, vec![Expr::int(-1), Expr::zero()]);
    let f = Symbol::param("k").expr() * (&th * 3).exp() + m.coords()[1].expr().powi(3);
    let want = f.diff(&m.coords()[0]).diff(&m.coords()[0]) - (-(&th * 2)).exp() * f.diff(&m.coords()[1]).diff(&m.coords()[1])
        + f.diff(&m.coords()[0]);
    assert!(zero(&(m.laplacian(&f) - want)));
    assert_eq!(m.ricci_scalar(), Expr::int(-2));
    // metric compatibility
    assert!(m.metric_covariant_derivative().iter().flatten().flatten().all(zero));
}

#[test]
fn minkowski_laplacian_of_exponential() {
    let m = minkowski();
    let (c, k) = (Symbol::param("c").expr(), Symbol::param("k").expr());
    let f = (&c * &m.coords()[0].expr() + &k * &m.coords()[1].expr()).exp();
    assert!(zero(&(m.laplacian(&f) - (&c * &c - &k * &k) * &f)));
    assert!(m.laplacian(&Expr::int(7)).is_zero());
}

#[test]
fn lie_derivatives() {
    let h = flat_field_metric(2).unwrap();
    let u: Vec<Expr> = h.coords().iter().map(|s| s.expr()).collect();
    let hv = VField::new(h.coords().to_vec(), u.clone());
    let l = h.lie_derivative_metric(&hv);
    assert_eq!(l, vec![vec![Expr::int(2), Expr::zero()], vec![Expr::zero(), Expr::int(2)]]);
    assert!(h.lie_derivative_metric(&VField::zero(h.coords())).iter().flatten().all(|e| e.is_zero()));
    let ac = VField::new(h.coords().to_vec(), vec![u[0].clone(), Expr::zero()]);
    assert!(h.lie_derivative_connection(&ac).iter().flatten().flatten().all(|e| e.is_zero()));
    let not_ac = VField::new(h.coords().to_vec(), vec![&u[0] * &u[0], Expr::zero()]);
    assert_eq!(h.lie_derivative_connection(&not_ac)[0][0][0], Expr::int(2));
    // linearity
    let rot = VField::new(h.coords().to_vec(), vec![u[1].clone(), -u[0].clone()]);
    let sum = h.lie_derivative_metric(&hv.add(&rot));
    let (a, b) = (h.lie_derivative_metric(&hv), h.lie_derivative_metric(&rot));
    for i in 0..2 {
        for j in 0..2 {
            assert_eq!(sum[i][j], &a[i][j] + &b[i][j]);
        }
    }
}

#[test]
fn hyperbolic_killing_vector_phi() {
    let m = hyperbolic_plane();
    let x1 = VField::basis(m.coords(), 1);
    assert!(m.lie_derivative_metric(&x1).iter().flatten().all(|e| e.is_zero()));
}

#[test]
fn asymmetric_and_degenerate_rejected() {
    let x = vec![Symbol::coord("x"), Symbol::coord("y")];
    let bad = Metric::new(x.clone(), vec![vec![Expr::one(), Expr::one()], vec![Expr::zero(), Expr::one()]], Role::Base);
    assert!(bad.is_err());
    let deg = Metric::new(x, vec![vec![Expr::one(), Expr::one()], vec![Expr::one(), Expr::one()]], Role::Base);
    assert!(deg.is_err());
}
