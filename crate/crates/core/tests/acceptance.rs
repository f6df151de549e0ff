//! Acceptance run: one line per criterion, nonzero exit if any fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::OnceLock;
use std::time::Instant;

use collineate::assembler::{analyse, SymmetryReport};
use collineate::cases::*;
use collineate::collineations::{hv_from_ckv, kv_from_ckv, solve_affine, solve_ckv, AnsatzSpec};
use collineate::expr::{Bindings, Expr, Symbol, ZeroTest, Q};
use collineate::geometry::{Metric, VField};
use collineate::symmetry::{check_lie_condition, check_noether_condition, check_on_shell_divergence, conservation_current, Generator, QuasilinearSystem};
use common::{ast, fd_gap, hidden_zero, in_span, nudge, vf};
use proptest::strategy::{Strategy, ValueTree};
use proptest::test_runner::TestRunner;

const AC_SECONDS: f64 = 1.0;
const CKV_SECONDS: f64 = 5.0;
const CASE_SECONDS: f64 = 30.0;
const SOLUTION_SECONDS: f64 = 60.0;
const BESSEL_TOL: f64 = 1e-8;
const FERRERS_TOL: f64 = 1e-6;
const DIGITS: u32 = 30;
const POINTS: usize = 10;
const SEED: u64 = 7;
const FD_REL: f64 = 1e-6;
const FD_CASES: usize = 200;
const ROUNDTRIP_CASES: usize = 500;
const NONZERO_CASES: usize = 200;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn q(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}

fn exprs(s: &[Symbol]) -> Vec<Expr> {
    s.iter().map(|s| s.expr()).collect()
}

fn all_zero<'a>(es: impl IntoIterator<Item = &'a Expr>) -> bool {
    let z = ZeroTest::default();
    es.into_iter().all(|e| z.is_zero(e))
}

fn is_kv(m: &Metric, v: &VField) -> bool {
    all_zero(m.lie_derivative_metric(v).iter().flatten())
}

fn is_ac(m: &Metric, v: &VField) -> bool {
    all_zero(m.lie_derivative_connection(v).iter().flatten().flatten())
}

fn c1() -> Outcome {
    let mut dims = Vec::new();
    let mut missing = Vec::new();
    let mut slowest = 0.0f64;
    for m in 1..=3 {
        let t = Instant::now();
        let h = flat_field_metric(m).unwrap();
        let a = AnsatzSpec::monomials(h.coords().to_vec(), 1).unwrap();
        let ac = solve_affine(&h, &a).unwrap();
        slowest = slowest.max(t.elapsed().as_secs_f64());
        dims.push(ac.dim());
        let u = exprs(h.coords());
        let span = ac.vector_fields();
        let unit = |a: usize, c: &Expr| {
            let mut v = vec![Expr::zero(); m];
            v[a] = c.clone();
            v
        };
        let mut listed: Vec<Vec<Expr>> = (0..m).map(|a| unit(a, &Expr::one())).collect();
        listed.push(u.clone());
        for a in 0..m {
            for b in 0..m {
                listed.push(unit(a, &u[b]));
                if a < b {
                    let mut r = unit(a, &u[b]);
                    r[b] = -u[a].clone();
                    listed.push(r);
                }
            }
        }
        for v in listed {
            let v = vf(h.coords(), &v);
            if !in_span(&span, &v) {
                missing.push(format!("{:?}", v.comps.iter().map(|e| e.to_string()).collect::<Vec<_>>()));
            }
        }
    }
    let pass = dims == [2, 6, 12] && missing.is_empty() && slowest < AC_SECONDS;
    outcome(pass, format!("dims {dims:?}, listed vectors outside span {missing:?}, slowest {slowest:.3} s"))
}

fn c2() -> Outcome {
    let mut found = Vec::new();
    let mut slowest = 0.0f64;
    for l in [3, 4] {
        let t = Instant::now();
        let g = euclidean(l).unwrap();
        let a = AnsatzSpec::monomials(g.coords().to_vec(), 2).unwrap();
        let ckv = solve_ckv(&g, &a).unwrap();
        let kv = kv_from_ckv(&ckv, &g, &a);
        let hv = hv_from_ckv(&ckv, &g, &a);
        slowest = slowest.max(t.elapsed().as_secs_f64());
        found.push((ckv.dim(), kv.dim(), hv.dim()));
    }
    let pass = found == [(10, 6, 1), (15, 10, 1)] && slowest < CKV_SECONDS;
    outcome(pass, format!("(ckv, kv, hv) = {found:?}, slowest {slowest:.3} s"))
}

fn hyperbolic_kvs(m: &Metric) -> Vec<VField> {
    let (th, ph) = (m.coords()[0].expr(), m.coords()[1].expr());
    vec![
        vf(m.coords(), &[Expr::zero(), Expr::one()]),
        vf(m.coords(), &[Expr::one(), -ph.clone()]),
        vf(m.coords(), &[&ph * 2, -(&ph * &ph + (-(th * 2)).exp())]),
    ]
}

fn c3() -> Outcome {
    let m = hyperbolic_plane();
    let a = AnsatzSpec::default_for(&m).unwrap();
    let ckv = solve_ckv(&m, &a).unwrap();
    let kv = kv_from_ckv(&ckv, &m, &a).vector_fields();
    let xs = hyperbolic_kvs(&m);
    let same_span = kv.len() == 3 && xs.iter().all(|x| in_span(&kv, x)) && kv.iter().all(|k| in_span(&xs, k));
    let affine = xs.iter().all(|x| is_ac(&m, x));
    let r = m.ricci_scalar();
    let pass = same_span && affine && r == Expr::int(-2);
    outcome(pass, format!("kv dim {}, span equal {same_span}, connection preserved {affine}, R = {r}", kv.len()))
}

fn gup_generators(h: &Metric, p: &GupParams) -> Vec<(&'static str, VField)> {
    let (psi, phi) = (h.coords()[0].expr(), h.coords()[1].expr());
    let b2 = p.b() * 2;
    let z = Expr::zero;
    let c = |a: Expr, b: Expr| vf(h.coords(), &[a, b]);
    vec![
        ("K1", c(Expr::one(), z())),
        ("K2", c(z(), Expr::one())),
        ("R", c(&b2 * &psi, &psi + &(&b2 * &phi))),
        ("Y", c(psi.clone(), phi.clone())),
        ("A1", c(psi.clone(), z())),
        ("A2", c(z(), phi.clone())),
        ("A3", c(phi.clone(), z())),
        ("A4", c(z(), psi.clone())),
    ]
}

fn c4() -> Outcome {
    let p = GupParams::default();
    let h = gup_field_metric(&p).unwrap();
    let flat = h.ricci_scalar().is_zero();
    let no_gamma = h.christoffel().gamma.iter().flatten().flatten().all(|e| e.is_zero());
    let mut bad = Vec::new();
    for (name, v) in gup_generators(&h, &p) {
        let ok = match name {
            "K1" | "K2" | "R" => is_kv(&h, &v),
            "Y" => {
                let l = h.lie_derivative_metric(&v);
                all_zero(l.iter().flatten().zip(h.components().iter().flatten()).map(|(a, g)| a - &(g * 2)).collect::<Vec<_>>().iter())
            }
            _ => is_ac(&h, &v),
        };
        if !ok {
            bad.push(name);
        }
    }
    let (psi, phi) = (h.coords()[0].expr(), h.coords()[1].expr());
    let b2 = p.b() * 2;
    let flipped = is_kv(&h, &vf(h.coords(), &[&b2 * &psi, -(&psi + &(&b2 * &phi))]));
    outcome(
        flat && no_gamma && bad.is_empty(),
        format!("R(H) = 0 {flat}, Gamma(H) = 0 {no_gamma}, failing generators {bad:?}, R with -(Psi + 2b Phi) d_Phi is a KV {flipped}"),
    )
}

fn c5() -> Outcome {
    let p = GupParams::default();
    let mut notes = Vec::new();
    let mut pass = true;
    for (name, g) in [("minkowski", minkowski()), ("hyperbolic", hyperbolic_plane())] {
        let sys = match make_gup_system(g.clone(), &p) {
            Ok(s) => s,
            Err(e) => return outcome(false, format!("{name}: {e}")),
        };
        let shown = gup_displayed_equations(&sys, &p);
        let eqs = sys.equations();
        let exact = (eqs[0].clone() - &shown[0]).is_zero() && (&eqs[1] * &(p.b() * 2) - &shown[1]).is_zero();
        let f = fourth_order_check(&g, &p).unwrap();
        pass &= exact && f.constraint_ok && f.minus_form;
        notes.push(format!(
            "{name}: pair exact {exact}, constraint {}, fourth-order form as stated {}, with +2b sign {}",
            f.constraint_ok, f.minus_form, f.plus_form
        ));
    }
    outcome(pass, notes.join("; "))
}

struct CaseRun {
    name: &'static str,
    system: QuasilinearSystem,
    report: SymmetryReport,
    seconds: f64,
}

static CASES: OnceLock<Vec<CaseRun>> = OnceLock::new();

fn gup_cases() -> &'static [CaseRun] {
    CASES.get_or_init(|| {
        let p = GupParams::default();
        [("gup-minkowski", minkowski()), ("gup-hyperbolic", hyperbolic_plane())]
            .into_iter()
            .map(|(name, g)| {
                let t = Instant::now();
                let system = make_gup_system(g, &p).unwrap();
                let report = analyse(&system, true).unwrap();
                CaseRun { name, system, report, seconds: t.elapsed().as_secs_f64() }
            })
            .collect()
    })
}

fn c6() -> Outcome {
    let want = [(13, 12), (6, 5)];
    let mut pass = true;
    let mut notes = Vec::new();
    for (run, w) in gup_cases().iter().zip(want) {
        let r = &run.report;
        let lie_ok = r.lie.iter().all(|g| {
            let c = check_lie_condition(&run.system, &g.generator);
            c.verdict && c.residual.is_empty()
        });
        let noe_ok = r.noether.iter().all(|g| check_noether_condition(&run.system, &g.generator).map(|c| c.is_noether()).unwrap_or(false));
        let fam_ok = r.family.as_ref().map(|f| f.lie && f.noether).unwrap_or(true);
        let got = (r.lie_count(), r.noether_count());
        pass &= got == w && lie_ok && noe_ok && fam_ok && run.seconds < CASE_SECONDS;
        notes.push(format!(
            "{}: lie/noether {}/{} (expected {}/{}), reverified lie {lie_ok} noether {noe_ok} family {fam_ok}, {:.2} s",
            run.name, got.0, got.1, w.0, w.1, run.seconds
        ));
    }
    outcome(pass, notes.join("; "))
}

fn c7() -> Outcome {
    let lap = make_laplace_system(euclidean(3).unwrap(), flat_field_metric(2).unwrap()).unwrap();
    let n_lap = analyse(&lap, false).unwrap().lie_count();
    let sm = make_sigma_model(&Expr::one(), 2, euclidean(3).unwrap()).unwrap();
    let rep = analyse(&sm.system, false).unwrap();
    let n_sig = rep.lie_count();
    let not_noether: Vec<String> = rep
        .lie
        .iter()
        .filter(|g| !check_noether_condition(&sm.system, &g.generator).map(|c| c.is_noether()).unwrap_or(false))
        .map(|g| format!("{} (xi = {:?})", g.provenance, g.generator.xi.iter().map(|e| e.to_string()).collect::<Vec<_>>()))
        .collect();
    let pass = n_lap == 16 && n_sig < n_lap && not_noether.is_empty();
    outcome(pass, format!("laplace lie {n_lap}, sigma-model lie {n_sig}, lie but not noether {not_noether:?}"))
}

fn z_generator(sys: &QuasilinearSystem, p: &GupParams) -> Generator {
    let (psi, phi) = (sys.u()[0].expr(), sys.u()[1].expr());
    let eta = vec![&psi + &(p.b() * 2 * &phi), -(&p.v0 * &psi)];
    Generator::new(vec![Expr::zero(); sys.n()], eta, "Z").unwrap()
}

fn c8() -> Outcome {
    let p = GupParams::default();
    let mut pass = true;
    let mut notes = Vec::new();
    for run in gup_cases() {
        let z = z_generator(&run.system, &p);
        let lie = check_lie_condition(&run.system, &z).verdict;
        let noe = check_noether_condition(&run.system, &z).unwrap().is_noether();
        pass &= lie && !noe;
        notes.push(format!("{}: lie {lie}, noether {noe}", run.name));
    }
    outcome(pass, notes.join("; "))
}

fn c9() -> Outcome {
    let mut pass = true;
    let mut notes = Vec::new();
    for run in gup_cases() {
        let r = &run.report;
        let ok = r.noether.iter().filter(|g| g.current.as_ref().is_some_and(|c| check_on_shell_divergence(&run.system, c))).count();
        let fam = match &r.family {
            Some(f) if f.noether => {
                let aux = run.system.clone().with_aux("b");
                let a = f.gauge.clone().unwrap_or_else(|| vec![Expr::zero(); aux.n()]);
                conservation_current(&aux, &f.generator, &a).map(|c| check_on_shell_divergence(&aux, &c)).unwrap_or(false)
            }
            _ => true,
        };
        pass &= ok == r.noether.len() && fam;
        notes.push(format!("{}: {ok}/{} currents conserved, family current {fam}", run.name, r.noether.len()));
    }
    outcome(pass, notes.join("; "))
}

fn c10() -> Outcome {
    let t = Instant::now();
    let mut notes = Vec::new();
    let mut pass = true;

    let p = GupParams::new(Expr::frac(1, 100), Expr::one(), Expr::one());
    let sys = make_gup_system(minkowski(), &p).unwrap();
    let cs = ["c1", "c2", "c3", "c4"].map(|s| Symbol::param(s).expr());
    let sol = gup_minkowski_solution(&p, &Expr::one(), &cs).unwrap();
    let base = verify_solution(&sys, &sol, &[], 0.0, DIGITS).unwrap();
    let eps = Symbol::param("epsilon").expr();
    let moved = gup_transform_solution(&sol, &p, &eps).unwrap();
    let moved_ok = verify_solution(&sys, &moved, &[], 0.0, DIGITS).unwrap().passed;
    let maps = |printed: bool| {
        let c2 = gup_transformed_constants(&p, &eps, &cs, printed);
        let target = gup_minkowski_solution(&p, &Expr::one(), &c2).unwrap();
        (0..2).all(|a| sys.zero.is_zero(&(&moved.fields[a].closed - &target.fields[a].closed)))
    };
    let (printed_map, corrected_map) = (maps(true), maps(false));
    pass &= base.passed && moved_ok && printed_map;
    notes.push(format!(
        "minkowski solution {} (sampled {}), transformed {moved_ok}, stated constant map {printed_map}, inverse-exponent map {corrected_map}",
        base.passed, base.probabilistic
    ));

    let hp = GupParams::new(Symbol::param("beta").expr(), Symbol::param("hbar").expr(), Symbol::param("V0").expr());
    let hsys = make_gup_system(hyperbolic_plane(), &hp).unwrap();
    let fixed = Bindings::new()
        .with_exact("beta", q(3, 1))
        .with_exact("hbar", q(1, 1))
        .with_exact("V0", q(1, 50))
        .with_exact("b1", q(1, 1))
        .with_exact("b2", q(1, 2))
        .with_exact("b3", q(1, 3))
        .with_exact("b4", q(1, 4));
    let bs = ["b1", "b2", "b3", "b4"].map(|s| Symbol::param(s).expr());
    let run = |kind, form, par: (&str, Q), ranges: &[(&str, Q, Q)], tol: f64| {
        let fixed = fixed.clone().with_exact(par.0, par.1);
        let pts = sample_points(ranges, &fixed, POINTS, SEED);
        let s = gup_hyperbolic_solution(&hp, kind, form, &Symbol::param(par.0).expr(), &bs).unwrap();
        let r = verify_solution(&hsys, &s, &pts, tol, DIGITS).unwrap();
        (r.passed && r.points_used >= POINTS, r.max_residual.unwrap_or(f64::NAN))
    };
    let unit = [("theta", q(0, 1), q(1, 1)), ("phi", q(0, 1), q(1, 1))];
    let far = [("theta", q(0, 1), q(1, 1)), ("phi", q(3, 2), q(5, 2))];
    let inside = [("theta", q(0, 1), q(3, 10)), ("phi", q(0, 1), q(1, 2))];
    use collineate::cases::{Form::*, HyperbolicKind::*};
    let x1 = run(X1, Printed, ("alpha", q(7, 10)), &unit, BESSEL_TOL);
    let x3 = run(X3, Printed, ("sigma", q(3, 5)), &unit, BESSEL_TOL);
    let x3c = run(X3, Corrected, ("sigma", q(3, 5)), &far, BESSEL_TOL);
    let x2 = run(X2, Printed, ("kappa", q(2, 5)), &inside, FERRERS_TOL);
    let x2c = run(X2, Corrected, ("kappa", q(2, 5)), &inside, FERRERS_TOL);
    pass &= x1.0 && x3.0 && x2.0;
    notes.push(format!(
        "X1 solution {} (max {:.1e}); X3 as stated {} (max {:.1e}), rederived {} (max {:.1e}); X2 as stated {} (max {:.1e}), rederived {} (max {:.1e})",
        x1.0, x1.1, x3.0, x3.1, x3c.0, x3c.1, x2.0, x2.1, x2c.0, x2c.1
    ));
    let secs = t.elapsed().as_secs_f64();
    pass &= secs < SOLUTION_SECONDS;
    notes.push(format!("{secs:.2} s"));
    outcome(pass, notes.join("; "))
}

fn c11() -> Outcome {
    let mut runner = TestRunner::deterministic();
    let mut draw = || ast().new_tree(&mut runner).unwrap().current();
    let mut fd_fail = 0;
    let mut fd_skip = 0;
    let mut worst = 0.0f64;
    let mut i = 0;
    while i < FD_CASES {
        let e = draw().build();
        let (px, py) = (0.5 + (i % 10) as f64 / 10.0, 0.5 + (i / 10 % 10) as f64 / 10.0);
        match fd_gap(&e, px, py) {
            Some(g) => {
                worst = worst.max(g);
                if g > FD_REL {
                    fd_fail += 1;
                }
                i += 1;
            }
            None => fd_skip += 1,
        }
    }
    let rt_fail = (0..ROUNDTRIP_CASES)
        .filter(|_| {
            let e = draw().build();
            Expr::parse(&e.to_string()).map(|b| b != e).unwrap_or(true)
        })
        .count();
    let mut runner = TestRunner::deterministic();
    let nz = (ast(), nudge());
    let accepted = (0..NONZERO_CASES)
        .filter(|_| {
            let (a, t) = nz.new_tree(&mut runner).unwrap().current();
            ZeroTest::with_seed(SEED).is_zero(&(hidden_zero(&a) + t))
        })
        .count();
    let pass = fd_fail == 0 && rt_fail == 0 && accepted == 0;
    outcome(
        pass,
        format!(
            "derivative: {fd_fail}/{FD_CASES} over {FD_REL:e} (worst {worst:.1e}, {fd_skip} redrawn); round trip: {rt_fail}/{ROUNDTRIP_CASES} failures; false zero: {accepted}/{NONZERO_CASES}"
        ),
    )
}

fn main() {
    let criteria: [(u32, &str, fn() -> Outcome); 11] = [
        (1, "affine collineations of flat spaces", c1),
        (2, "conformal algebras of Euclidean spaces", c2),
        (3, "Killing vectors of the hyperbolic plane", c3),
        (4, "flat field metric of the GUP system", c4),
        (5, "Euler-Lagrange equations of the GUP Lagrangian", c5),
        (6, "symmetry counts of the GUP systems", c6),
        (7, "Laplace bound and sigma-model reduction", c7),
        (8, "Z is Lie but not Noether", c8),
        (9, "conservation laws", c9),
        (10, "exact and special-function solutions", c10),
        (11, "engine properties", c11),
    ];
    let mut passed = 0;
    for (n, name, f) in criteria {
        let t = Instant::now();
        let o = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            outcome(false, format!("panicked: {}", msg.unwrap_or_default()))
        });
        passed += o.pass as usize;
        let verdict = if o.pass { "PASS" } else { "FAIL" };
        println!("criterion {n:>2} {verdict} [{:.2} s] {name}: {}", t.elapsed().as_secs_f64(), o.detail);
    }
    println!("acceptance: {passed}/{} criteria passed", criteria.len());
    if passed != criteria.len() {
        std::process::exit(1);
    }
}
