//! Built-in cases and their named solutions.

use collineate::assembler::{dimension_bounds, Bounds, CaseKind};
use collineate::cases::{
    euclidean, flat_field_metric, gup_hyperbolic_solution, gup_minkowski_solution, gup_transform_solution, hyperbolic_plane,
    make_gup_system, make_laplace_system, make_sigma_model, minkowski, sample_points, CaseError, CaseName, FieldSolution, Form,
    GupParams, HyperbolicKind,
};
use collineate::expr::{Bindings, Expr, Symbol, SymbolClass, SymbolTable, Q};
use collineate::symmetry::QuasilinearSystem;

use crate::problem::{Problem, Settings};
use crate::CliError;

pub struct Builtin {
    pub case: CaseName,
    pub problem: Problem,
    pub bounds: Option<Bounds>,
}

fn q(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}

fn case_error(e: CaseError) -> CliError {
    match e {
        CaseError::UnknownCase(_) | CaseError::FieldCount { .. } | CaseError::ComplexExponents(_) => CliError::Input(e.to_string()),
        _ => CliError::Solver(e.to_string()),
    }
}

fn minkowski_fixture() -> GupParams {
    GupParams::new(Expr::frac(1, 100), Expr::one(), Expr::one())
}

fn hyperbolic_fixture() -> Bindings {
    Bindings::new()
        .with_exact("beta", q(3, 1))
        .with_exact("hbar", q(1, 1))
        .with_exact("V0", q(1, 50))
        .with_exact("alpha", q(7, 10))
        .with_exact("sigma", q(3, 5))
        .with_exact("kappa", q(2, 5))
        .with_exact("b1", q(1, 1))
        .with_exact("b2", q(1, 2))
        .with_exact("b3", q(1, 3))
        .with_exact("b4", q(1, 4))
}

fn table_for(sys: &QuasilinearSystem) -> SymbolTable {
    let mut t = SymbolTable::new();
    for s in sys.x() {
        t.insert(s.name(), SymbolClass::CoordX);
    }
    for s in sys.u() {
        t.insert(s.name(), SymbolClass::CoordU);
    }
    t
}

/// `None` when `name` is not a built-in case.
pub fn lookup(name: &str, n: Option<usize>, m: Option<usize>, settings: Settings) -> Result<Option<Builtin>, CliError> {
    let Ok(case) = name.parse::<CaseName>() else { return Ok(None) };
    let dims = |dn: usize, dm: usize| (n.unwrap_or(dn), m.unwrap_or(dm));
    let fixed = |what: &str| -> Result<(), CliError> {
        if n.is_some() || m.is_some() {
            return Err(CliError::Input(format!("{what} has fixed dimensions; --n and --m do not apply")));
        }
        Ok(())
    };
    let (system, fixture, bounds) = match case {
        CaseName::LaplaceFlat => {
            let (n, m) = dims(3, 2);
            let sys = make_laplace_system(euclidean(n).map_err(case_error)?, flat_field_metric(m).map_err(case_error)?).map_err(case_error)?;
            (sys, Bindings::new(), dimension_bounds(n, m, CaseKind::LaplaceFlat).ok())
        }
        CaseName::SigmaModel => {
            let (n, m) = dims(3, 2);
            let sm = make_sigma_model(&Expr::one(), m, euclidean(n).map_err(case_error)?).map_err(case_error)?;
            (sm.system, Bindings::new(), dimension_bounds(n, m, CaseKind::SigmaModel).ok())
        }
        CaseName::GupMinkowski => {
            fixed("gup-minkowski")?;
            let sys = make_gup_system(minkowski(), &GupParams::default()).map_err(case_error)?;
            let b = Bindings::new().with_exact("beta", q(1, 100)).with_exact("hbar", q(1, 1)).with_exact("V0", q(1, 1));
            (sys, b, dimension_bounds(4, 2, CaseKind::Gup).ok())
        }
        CaseName::GupHyperbolic => {
            fixed("gup-hyperbolic")?;
            let sys = make_gup_system(hyperbolic_plane(), &GupParams::default()).map_err(case_error)?;
            (sys, hyperbolic_fixture(), dimension_bounds(2, 2, CaseKind::Gup).ok())
        }
    };
    let system = system.with_zero_test(settings.zero.clone());
    let problem = Problem {
        name: case.to_string(),
        g: Some(system.g.clone()),
        h: Some(system.h.clone()),
        table: table_for(&system),
        system: Some(system),
        fixture,
        settings,
    };
    Ok(Some(Builtin { case, problem, bounds }))
}

pub struct SolutionJob {
    pub system: QuasilinearSystem,
    pub solution: FieldSolution,
    pub points: Vec<Bindings>,
    pub tol: f64,
}

pub const SOLUTIONS: &[(&str, &str)] = &[
    ("gup-minkowski", "modes, modes-transformed"),
    ("gup-hyperbolic", "x1, x1-first-bracket, x2, x2-printed, x3, x3-printed"),
];

/// A named solution of a built-in case.
pub fn solution(b: &Builtin, name: &str, points: usize, tol: Option<f64>) -> Result<SolutionJob, CliError> {
    let s = &b.problem.settings;
    let unknown = || {
        let known = SOLUTIONS.iter().find(|(c, _)| *c == b.case.to_string()).map(|(_, n)| *n).unwrap_or("none");
        CliError::Input(format!("unknown solution '{name}' for {}; known: {known}", b.case))
    };
    let cs = ["c1", "c2", "c3", "c4"].map(|s| Symbol::param(s).expr());
    match b.case {
        CaseName::GupMinkowski => {
            let p = minkowski_fixture();
            let system = make_gup_system(minkowski(), &p).map_err(case_error)?.with_zero_test(s.zero.clone());
            let base = gup_minkowski_solution(&p, &Expr::one(), &cs).map_err(case_error)?;
            let solution = match name {
                "modes" => base,
                "modes-transformed" => gup_transform_solution(&base, &p, &Symbol::param("epsilon").expr()).map_err(case_error)?,
                _ => return Err(unknown()),
            };
            Ok(SolutionJob { system, solution, points: Vec::new(), tol: 0.0 })
        }
        CaseName::GupHyperbolic => {
            use Form::*;
            use HyperbolicKind::*;
            let unit = (q(0, 1), q(1, 1));
            let (kind, form, par, theta, phi) = match name {
                "x1" => (X1, Printed, "alpha", unit.clone(), unit.clone()),
                "x1-first-bracket" => (X1, FirstBracketOnly, "alpha", unit.clone(), unit.clone()),
                "x2" => (X2, Corrected, "kappa", (q(0, 1), q(3, 10)), (q(0, 1), q(1, 2))),
                "x2-printed" => (X2, Printed, "kappa", (q(0, 1), q(3, 10)), (q(0, 1), q(1, 2))),
                "x3" => (X3, Corrected, "sigma", unit.clone(), (q(3, 2), q(5, 2))),
                "x3-printed" => (X3, Printed, "sigma", unit.clone(), unit.clone()),
                _ => return Err(unknown()),
            };
            let bs = ["b1", "b2", "b3", "b4"].map(|s| Symbol::param(s).expr());
            let solution =
                gup_hyperbolic_solution(&GupParams::default(), kind, form, &Symbol::param(par).expr(), &bs).map_err(case_error)?;
            let ranges = [("theta", theta.0, theta.1), ("phi", phi.0, phi.1)];
            let points = sample_points(&ranges, &b.problem.fixture, points, s.seed);
            let tol = tol.unwrap_or(if kind == X2 { 1e-6 } else { s.tol });
            Ok(SolutionJob { system: b.problem.system()?.clone(), solution, points, tol })
        }
        _ => Err(unknown()),
    }
}
