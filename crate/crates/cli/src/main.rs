mod builtin;
mod problem;
mod render;

use std::path::Path;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use collineate::assembler::{analyse_with, AssemblerError};
use collineate::cases::{verify_solution, FieldSolution, SolutionField};
use collineate::collineations::{
    hv_from_ckv, kv_from_ckv, solve_affine, solve_ckv, solve_killing_tensor2, AnsatzSpec, CollineationError, CollineationSet,
};
use collineate::expr::{Expr, SymbolClass};
use collineate::geometry::Metric;
use collineate::symmetry::{check_lie_condition, check_noether_condition, check_on_shell_divergence, conservation_current, Generator};
use serde::Deserialize;
use serde_json::{json, Value};
use thiserror::Error;

use builtin::Builtin;
use problem::{parse_expr, Problem, Settings};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("input error: {0}")]
    Input(String),
    #[error("solver error: {0}")]
    Solver(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Input(_) => 1,
            CliError::Solver(_) => 2,
        }
    }
}

impl From<CollineationError> for CliError {
    fn from(e: CollineationError) -> Self {
        CliError::Solver(e.to_string())
    }
}

impl From<AssemblerError> for CliError {
    fn from(e: AssemblerError) -> Self {
        CliError::Solver(e.to_string())
    }
}

/// Lie and Noether point symmetries of quasilinear second-order systems.
#[derive(Parser)]
#[command(name = "collineate", version)]
struct Cli {
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for zero testing and sample points.
    #[arg(long, global = true, env = "COLLINEATE_SEED")]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Kv,
    Hv,
    Ckv,
    Ac,
    Kt2,
}

#[derive(Clone, Copy, ValueEnum)]
enum Which {
    G,
    H,
}

#[derive(Subcommand)]
enum Command {
    /// Collineations of one metric of a problem file or built-in case.
    Collineations {
        /// Built-in case name or problem file.
        target: String,
        #[arg(long, value_enum)]
        kind: KindArg,
        /// Polynomial degree of the ansatz.
        #[arg(long)]
        degree: Option<u32>,
        /// Which metric; defaults to g when present.
        #[arg(long, value_enum)]
        metric: Option<Which>,
    },
    /// Assembled Lie (and Noether) symmetry algebra.
    Symmetries {
        /// Built-in case name or problem file.
        target: String,
        #[arg(long)]
        noether: bool,
    },
    /// Check a generator or a solution.
    Verify {
        /// Built-in case name or problem file.
        target: String,
        /// `xi^1, ..., xi^n ; eta^1, ..., eta^m`
        #[arg(long, required_unless_present = "solution", conflicts_with = "solution")]
        generator: Option<String>,
        /// Built-in solution name, or a JSON file `{"fields": [...]}`.
        #[arg(long)]
        solution: Option<String>,
        /// Sample points for numeric solutions.
        #[arg(long)]
        points: Option<usize>,
        /// Residual tolerance for numeric solutions.
        #[arg(long)]
        tol: Option<f64>,
        /// Require the Noether condition as well.
        #[arg(long)]
        noether: bool,
    },
    /// Symmetry report of a built-in case.
    Case {
        name: String,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        noether: bool,
    },
}

enum Target {
    Case(Builtin),
    File(Problem),
}

impl Target {
    fn problem(&self) -> &Problem {
        match self {
            Target::Case(b) => &b.problem,
            Target::File(p) => p,
        }
    }
}

fn resolve(target: &str, seed: Option<u64>) -> Result<Target, CliError> {
    let settings = Settings::new(&Default::default(), seed);
    if let Some(b) = builtin::lookup(target, None, None, settings)? {
        return Ok(Target::Case(b));
    }
    let path = Path::new(target);
    if !path.exists() {
        return Err(CliError::Input(format!("'{target}' is neither a built-in case nor a readable file")));
    }
    Ok(Target::File(Problem::load(path, seed)?))
}

fn ansatz(m: &Metric, s: &Settings, degree: Option<u32>) -> Result<AnsatzSpec, CliError> {
    Ok(AnsatzSpec::for_metric(m, degree.unwrap_or(s.degree), s.window)?)
}

fn collineations(p: &Problem, kind: KindArg, degree: Option<u32>, which: Option<Which>) -> Result<(Value, bool), CliError> {
    let (label, m) = match which {
        Some(Which::G) => ("g", p.g.as_ref()),
        Some(Which::H) => ("H", p.h.as_ref()),
        None if p.g.is_some() => ("g", p.g.as_ref()),
        None => ("H", p.h.as_ref()),
    };
    let m = m.ok_or_else(|| CliError::Input(format!("problem has no metric {label}")))?;
    let a = ansatz(m, &p.settings, degree)?;
    let set: CollineationSet = match kind {
        KindArg::Ckv => solve_ckv(m, &a)?,
        KindArg::Kv => kv_from_ckv(&solve_ckv(m, &a)?, m, &a),
        KindArg::Hv => hv_from_ckv(&solve_ckv(m, &a)?, m, &a),
        KindArg::Ac => solve_affine(m, &a)?,
        KindArg::Kt2 => solve_killing_tensor2(m, &a)?,
    };
    Ok((render::collineations(&p.name, label, m, &a, &set), true))
}

fn symmetries(p: &Problem, noether: bool, bounds: Option<&collineate::assembler::Bounds>) -> Result<(Value, bool), CliError> {
    let sys = p.system()?;
    let ag = ansatz(&sys.g, &p.settings, None)?;
    let ah = ansatz(&sys.h, &p.settings, None)?;
    let rep = analyse_with(sys, &ag, &ah, noether)?;
    Ok((render::symmetries(&p.name, sys, &rep, noether, bounds), true))
}

fn parse_generator(p: &Problem, text: &str) -> Result<Generator, CliError> {
    let sys = p.system()?;
    let (xs, es) = text
        .split_once(';')
        .ok_or_else(|| CliError::Input("generator: expected 'xi components ; eta components'".into()))?;
    let sub = Default::default();
    let list = |s: &str, what: &str, want: usize| -> Result<Vec<Expr>, CliError> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != want {
            return Err(CliError::Input(format!("generator: {what} needs {want} components, got {}", parts.len())));
        }
        parts.iter().enumerate().map(|(i, t)| parse_expr(t, &p.table, &sub, &format!("generator {what}[{i}]"))).collect()
    };
    let xi = list(xs, "xi", sys.n())?;
    let eta = list(es, "eta", sys.m())?;
    Generator::new(xi, eta, text.trim()).map_err(|e| CliError::Input(e.to_string()))
}

fn verify_generator(p: &Problem, text: &str, need_noether: bool) -> Result<(Value, bool), CliError> {
    let sys = p.system()?;
    let g = parse_generator(p, text)?;
    let lie = check_lie_condition(sys, &g);
    let noether = if sys.lagrangian().is_some() {
        let r = check_noether_condition(sys, &g).map_err(|e| CliError::Solver(e.to_string()))?;
        let current = match &r.gauge {
            Some(a) => Some(conservation_current(sys, &g, a).map_err(|e| CliError::Solver(e.to_string()))?),
            None => None,
        };
        let conserved = current.as_ref().map(|c| check_on_shell_divergence(sys, c));
        Some((r, current, conserved))
    } else {
        None
    };
    let noether_ok = noether.as_ref().is_some_and(|(r, _, _)| r.is_noether());
    let passed = lie.verdict && (!need_noether || noether_ok);
    Ok((render::generator_verdict(&p.name, &g, &lie, noether.as_ref(), passed), passed))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SolutionFile {
    #[serde(default)]
    name: Option<String>,
    fields: Vec<String>,
}

fn verify_solution_cmd(t: &Target, name: &str, points: Option<usize>, tol: Option<f64>) -> Result<(Value, bool), CliError> {
    let p = t.problem();
    let count = points.unwrap_or(p.settings.points);
    let job = match t {
        Target::Case(b) if !Path::new(name).exists() => builtin::solution(b, name, count, tol)?,
        _ => {
            let sys = p.system()?;
            let text = std::fs::read_to_string(name).map_err(|e| CliError::Input(format!("{name}: {e}")))?;
            let f: SolutionFile = serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{name}: {e}")))?;
            let mut sub = collineate::expr::Substitution::new();
            for n in p.fixture.names() {
                if let Some(q) = p.fixture.exact(n) {
                    sub.insert(collineate::expr::Symbol::param(n), Expr::rational(q.clone()));
                }
            }
            let fields = f
                .fields
                .iter()
                .enumerate()
                .map(|(a, s)| parse_expr(s, &p.table, &sub, &format!("{name}: fields[{a}]")).map(SolutionField::closed))
                .collect::<Result<Vec<_>, _>>()?;
            let solution = FieldSolution { name: f.name.unwrap_or_else(|| name.to_string()), fields, notes: Vec::new() };
            builtin::SolutionJob { system: sys.clone(), solution, points: Vec::new(), tol: 0.0 }
        }
    };
    if job.solution.fields.len() != job.system.m() {
        return Err(CliError::Input(format!("solution has {} fields, system has {}", job.solution.fields.len(), job.system.m())));
    }
    // every symbol other than coordinates must be bound for numeric checks
    if !job.points.is_empty() {
        let mut free = Vec::new();
        for f in &job.solution.fields {
            let mut es = vec![f.closed.clone()];
            for t in &f.terms {
                es.push(t.prefactor.clone());
                es.push(t.arg.clone());
            }
            for e in es {
                for s in e.symbols() {
                    if s.class() == SymbolClass::Parameter && !job.points[0].contains(s.name()) && !free.contains(&s.name().to_string()) {
                        free.push(s.name().to_string());
                    }
                }
            }
        }
        if !free.is_empty() {
            return Err(CliError::Input(format!("unbound parameters: {}", free.join(", "))));
        }
    }
    let digits = p.settings.digits;
    let rep = verify_solution(&job.system, &job.solution, &job.points, job.tol, digits).map_err(|e| CliError::Solver(e.to_string()))?;
    Ok((render::solution_verdict(&p.name, &job.solution, &rep), rep.passed))
}

fn run(cli: Cli) -> Result<(Value, bool), CliError> {
    match cli.command {
        Command::Collineations { target, kind, degree, metric } => {
            collineations(resolve(&target, cli.seed)?.problem(), kind, degree, metric)
        }
        Command::Symmetries { target, noether } => match resolve(&target, cli.seed)? {
            Target::Case(b) => symmetries(&b.problem, noether, b.bounds.as_ref()),
            Target::File(p) => symmetries(&p, noether, None),
        },
        Command::Verify { target, generator, solution, points, tol, noether } => {
            let t = resolve(&target, cli.seed)?;
            match (generator, solution) {
                (Some(g), _) => verify_generator(t.problem(), &g, noether),
                (None, Some(s)) => verify_solution_cmd(&t, &s, points, tol),
                (None, None) => Err(CliError::Input("give --generator or --solution".into())),
            }
        }
        Command::Case { name, n, m, noether } => {
            let settings = Settings::new(&Default::default(), cli.seed);
            let b = builtin::lookup(&name, n, m, settings)?.ok_or_else(|| {
                CliError::Input(format!("unknown case '{name}'; known: laplace-flat, sigma-model, gup-minkowski, gup-hyperbolic"))
            })?;
            symmetries(&b.problem, noether, b.bounds.as_ref())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let json = cli.json;
    match run(cli) {
        Ok((v, passed)) => {
            if json {
                println!("{}", serde_json::to_string_pretty(&v).expect("serializable"));
            } else {
                print!("{}", render::text(&v));
            }
            ExitCode::from(if passed { 0 } else { 3 })
        }
        Err(e) => {
            if json {
                println!("{}", serde_json::to_string_pretty(&json!({"schema": 1, "error": e.to_string(), "exit": e.code()})).expect("serializable"));
            }
            eprintln!("collineate: {e}");
            ExitCode::from(e.code())
        }
    }
}
