use super::*;
use crate::expr::{Bindings, Real, Q};

fn q(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}

fn r(s: &str) -> Real {
    Real::parse(s, crate::expr::bits_for_digits(40))
}

fn close(a: &Real, b: f64, tol: f64) -> bool {
    (a.to_f64() - b).abs() < tol
}

#[test]
fn special_values() {
    let one = r("1");
    let half = r("0.5");
    // I_{1/2}(1) = sqrt(2/pi) sinh 1, K_{1/2}(1) = sqrt(pi/2) e^{-1}
    assert!(close(&bessel_i(&half, &one, 30).unwrap(), 0.937_674_888_245_488, 1e-14));
    assert!(close(&bessel_k(&half, &one, 30).unwrap(), 0.461_068_504_447_894, 1e-14));
    assert!(close(&hyp2f1(&r("0.3"), &r("1.7"), &r("2.2"), &r("0"), 30).unwrap(), 1.0, 1e-30));
    assert!(close(&gamma(&r("0.5"), 30).unwrap(), std::f64::consts::PI.sqrt(), 1e-14));
    assert!(close(&gamma(&r("-1.5"), 30).unwrap(), 4.0 * std::f64::consts::PI.sqrt() / 3.0, 1e-13));
    assert_eq!(bessel_k(&one, &one, 30), Err(SpecialError::IntegerOrder(1)));
    assert!(matches!(bessel_i(&half, &r("11"), 30), Err(SpecialError::Range(_))));
    assert!(matches!(hyp2f1(&half, &half, &half, &r("1"), 30), Err(SpecialError::Range(_))));
    // P_1^0(z) = z
    assert!(close(&legendre_p(&one, &r("0"), &r("0.3"), 30).unwrap(), 0.3, 1e-25));
}

#[test]
fn bessel_ode_holds() {
    for nu in ["0.3", "-0.4", "1.25"] {
        let nu = r(nu);
        for x in ["0.2", "1.1", "3.7"] {
            let x = r(x);
            for f in [Special::BesselI(nu.clone()), Special::BesselK(nu.clone())] {
                let [y, dy, _] = f.jet(&x, 30).unwrap();
                // x² y'' + x y' - (x² + ν²) y with y'' from recurrences on y'
                let h = r("1e-12");
                let [_, dy2, _] = f.jet(&(&x + &h), 30).unwrap();
                let ddy = (dy2 - &dy) / &h;
                let res = &x * &x * ddy + &x * &dy - (&x * &x + &nu * &nu) * &y;
                assert!(res.to_f64().abs() < 1e-9, "{res}");
            }
        }
    }
}

#[test]
fn laplace_and_hyperbolic_systems() {
    let s = make_laplace_system(euclidean(3).unwrap(), flat_field_metric(2).unwrap()).unwrap();
    let e = s.equation(0);
    assert_eq!(e, s.jets.u2(0, 0, 0) + s.jets.u2(0, 1, 1) + s.jets.u2(0, 2, 2));
    let s = make_laplace_system(hyperbolic_plane(), flat_field_metric(1).unwrap()).unwrap();
    let th = Symbol::coord("theta").expr();
    let want = s.jets.u2(0, 0, 0) - (-(th * 2)).exp() * s.jets.u2(0, 1, 1) + s.jets.u1(0, 0);
    assert!(s.zero.is_zero(&(s.equation(0) - want)));
}

#[test]
fn sigma_model_connection() {
    let sm = make_sigma_model(&Expr::one(), 2, euclidean(3).unwrap()).unwrap();
    assert!(sm.actual_connection_ok);
    assert!(!sm.quoted_connection_ok);
    assert!(matches!(make_sigma_model(&Expr::zero(), 2, euclidean(3).unwrap()), Err(CaseError::ZeroCurvature)));
}

#[test]
fn gup_systems_and_fourth_order() {
    let p = GupParams::default();
    for g in [minkowski(), hyperbolic_plane()] {
        make_gup_system(g.clone(), &p).unwrap();
        let c = fourth_order_check(&g, &p).unwrap();
        assert!(c.constraint_ok);
        assert!(c.plus_form);
        assert!(!c.minus_form);
    }
    let zero = GupParams::new(Expr::zero(), Expr::one(), Expr::one());
    assert!(matches!(make_gup_system(minkowski(), &zero), Err(CaseError::DegenerateGup)));
}

fn fixture_m4() -> GupParams {
    GupParams::new(Expr::frac(1, 100), Expr::one(), Expr::one())
}

fn cs() -> [Expr; 4] {
    ["c1", "c2", "c3", "c4"].map(|s| Symbol::param(s).expr())
}

#[test]
fn minkowski_solution_and_transform() {
    let p = fixture_m4();
    let sys = make_gup_system(minkowski(), &p).unwrap();
    let sol = gup_minkowski_solution(&p, &Expr::one(), &cs()).unwrap();
    assert!(verify_solution(&sys, &sol, &[], 0.0, 30).unwrap().passed);
    let zero = gup_minkowski_solution(&p, &Expr::one(), &[Expr::zero(), Expr::zero(), Expr::zero(), Expr::zero()]).unwrap();
    assert!(zero.fields.iter().all(|f| f.closed.is_zero()));

    let eps = Symbol::param("epsilon").expr();
    let moved = gup_transform_solution(&sol, &p, &eps).unwrap();
    assert!(verify_solution(&sys, &moved, &[], 0.0, 30).unwrap().passed);
    for (printed, expect) in [(true, false), (false, true)] {
        let c2 = gup_transformed_constants(&p, &eps, &cs(), printed);
        let target = gup_minkowski_solution(&p, &Expr::one(), &c2).unwrap();
        let d = &moved.fields[0].closed - &target.fields[0].closed;
        assert_eq!(sys.zero.is_zero(&d), expect);
    }
    // identity and group law
    let id = gup_transform_solution(&sol, &p, &Expr::zero()).unwrap();
    assert!(sys.zero.is_zero(&(&id.fields[0].closed - &sol.fields[0].closed)));
    let (e1, e2) = (Symbol::param("e1").expr(), Symbol::param("e2").expr());
    let twice = gup_transform_solution(&gup_transform_solution(&sol, &p, &e1).unwrap(), &p, &e2).unwrap();
    let once = gup_transform_solution(&sol, &p, &(&e1 + &e2)).unwrap();
    for a in 0..2 {
        assert!(sys.zero.is_zero(&(&twice.fields[a].closed - &once.fields[a].closed)));
    }
}

#[test]
fn complex_exponents_rejected() {
    let p = GupParams::new(Expr::one(), Expr::one(), Expr::one());
    assert!(matches!(gup_minkowski_solution(&p, &Expr::one(), &cs()), Err(CaseError::ComplexExponents(_))));
}

fn hyperbolic_fixture() -> (GupParams, Bindings) {
    let p = GupParams::new(Symbol::param("beta").expr(), Symbol::param("hbar").expr(), Symbol::param("V0").expr());
    let b = Bindings::new()
        .with_exact("beta", q(3, 1))
        .with_exact("hbar", q(1, 1))
        .with_exact("V0", q(1, 50))
        .with_exact("b1", q(1, 1))
        .with_exact("b2", q(1, 2))
        .with_exact("b3", q(1, 3))
        .with_exact("b4", q(1, 4));
    (p, b)
}

fn bs() -> [Expr; 4] {
    ["b1", "b2", "b3", "b4"].map(|s| Symbol::param(s).expr())
}

#[test]
fn hyperbolic_solutions() {
    let (p, fixed) = hyperbolic_fixture();
    let sys = make_gup_system(hyperbolic_plane(), &p).unwrap();
    let run = |kind, form, par: (&str, Q), ranges: &[(&str, Q, Q)]| {
        let fixed = fixed.clone().with_exact(par.0, par.1);
        let pts = sample_points(ranges, &fixed, 10, 7);
        let sol = gup_hyperbolic_solution(&p, kind, form, &Symbol::param(par.0).expr(), &bs()).unwrap();
        verify_solution(&sys, &sol, &pts, 1e-8, 30).unwrap()
    };
    let unit = [("theta", q(0, 1), q(1, 1)), ("phi", q(0, 1), q(1, 1))];
    let r = run(HyperbolicKind::X1, Form::Printed, ("alpha", q(7, 10)), &unit);
    assert!(r.passed, "{r:?}");
    assert_eq!(r.points_used, 10);
    let r = run(HyperbolicKind::X1, Form::FirstBracketOnly, ("alpha", q(7, 10)), &unit);
    assert!(!r.passed);

    let far = [("theta", q(0, 1), q(1, 1)), ("phi", q(3, 2), q(5, 2))];
    let r = run(HyperbolicKind::X3, Form::Corrected, ("sigma", q(3, 5)), &far);
    assert!(r.passed, "{r:?}");
    let r = run(HyperbolicKind::X3, Form::Printed, ("sigma", q(3, 5)), &unit);
    assert!(!r.passed);

    let inside = [("theta", q(0, 1), q(3, 10)), ("phi", q(0, 1), q(1, 2))];
    let r = run(HyperbolicKind::X2, Form::Corrected, ("kappa", q(2, 5)), &inside);
    assert!(r.passed && r.max_residual.unwrap() < 1e-6, "{r:?}");
    let r = run(HyperbolicKind::X2, Form::Printed, ("kappa", q(2, 5)), &inside);
    assert!(!r.passed);
}
