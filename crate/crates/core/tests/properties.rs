mod common;

use collineate::expr::{Expr, ZeroTest};
use common::{ast, fd_gap, hidden_zero, nudge};
use proptest::prelude::*;
use proptest::strategy::ValueTree;

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn derivative_matches_finite_difference(a in ast(), px in 0.5f64..1.5, py in 0.5f64..1.5) {
        let e = a.build();
        if let Some(gap) = fd_gap(&e, px, py) {
            prop_assert!(gap <= 1e-6, "{e}: {gap}");
        }
    }

    #[test]
    fn known_nonzero_is_never_zero(a in ast(), t in nudge()) {
        let e = hidden_zero(&a) + t;
        prop_assert!(!ZeroTest::default().is_zero(&e), "{e}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 500, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn print_then_parse_is_identity(a in ast()) {
        let e = a.build();
        let back = Expr::parse(&e.to_string()).unwrap();
        prop_assert_eq!(back, e);
    }
}

#[test]
fn hidden_zeros_are_zero() {
    let mut runner = proptest::test_runner::TestRunner::deterministic();
    for _ in 0..20 {
        let a = ast().new_tree(&mut runner).unwrap().current();
        assert!(ZeroTest::default().is_zero(&hidden_zero(&a)));
    }
}
