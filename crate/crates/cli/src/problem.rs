//! Problem files: JSON with expression-valued strings.

use std::collections::BTreeMap;
use std::path::Path;

use collineate::expr::{Bindings, Expr, Substitution, Symbol, SymbolClass, SymbolTable, ZeroTest, Q};
use collineate::geometry::{Metric, Role};
use collineate::symmetry::{euler_lagrange, QuasilinearSystem};
use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Options {
    pub degree: Option<u32>,
    pub window: Option<(i32, i32)>,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
    pub digits: Option<u32>,
    pub tol: Option<f64>,
    pub points: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    #[serde(default)]
    pub x: Vec<String>,
    #[serde(default)]
    pub u: Vec<String>,
    pub g: Option<Vec<Vec<String>>>,
    #[serde(rename = "H")]
    pub h: Option<Vec<Vec<String>>>,
    #[serde(rename = "V")]
    pub v: Option<String>,
    #[serde(rename = "F")]
    pub f: Option<Vec<String>>,
    /// Parameter names with optional rational values.
    #[serde(default)]
    pub parameters: BTreeMap<String, Option<String>>,
    #[serde(default)]
    pub options: Options,
}

/// Settings after defaults, file options and flags are merged.
#[derive(Clone, Debug)]
pub struct Settings {
    pub degree: u32,
    pub window: (i32, i32),
    pub zero: ZeroTest,
    pub digits: u32,
    pub tol: f64,
    pub points: usize,
    pub seed: u64,
}

impl Settings {
    pub fn new(o: &Options, seed_flag: Option<u64>) -> Settings {
        let seed = seed_flag.or(o.seed).unwrap_or(7);
        let mut zero = ZeroTest::with_seed(seed);
        if let Some(s) = o.samples {
            zero.samples = s;
        }
        Settings {
            degree: o.degree.unwrap_or(2),
            window: o.window.unwrap_or((-2, 2)),
            zero,
            digits: o.digits.unwrap_or(30),
            tol: o.tol.unwrap_or(1e-8),
            points: o.points.unwrap_or(10),
            seed,
        }
    }
}

/// A loaded problem: whatever metrics the file declares, and the system
/// when both are present.
pub struct Problem {
    pub name: String,
    pub g: Option<Metric>,
    pub h: Option<Metric>,
    pub system: Option<QuasilinearSystem>,
    pub table: SymbolTable,
    pub fixture: Bindings,
    pub settings: Settings,
}

fn input(msg: impl Into<String>) -> CliError {
    CliError::Input(msg.into())
}

pub fn parse_rational(s: &str, what: &str) -> Result<Q, CliError> {
    let e = Expr::parse(s).map_err(|e| input(format!("{what}: {e}")))?;
    e.as_rational().ok_or_else(|| input(format!("{what}: '{s}' is not a rational number")))
}

pub fn parse_expr(s: &str, table: &SymbolTable, sub: &Substitution, what: &str) -> Result<Expr, CliError> {
    let e = Expr::parse_with(s, table).map_err(|e| input(format!("{what}: {e}")))?;
    Ok(if sub.is_empty() { e } else { e.subs(sub) })
}

fn matrix(
    rows: &[Vec<String>],
    coords: &[Symbol],
    role: Role,
    label: &str,
    table: &SymbolTable,
    sub: &Substitution,
) -> Result<Metric, CliError> {
    let n = coords.len();
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(input(format!("{label}: expected a {n}x{n} matrix to match its coordinate list")));
    }
    let mut comps = Vec::with_capacity(n);
    for (a, row) in rows.iter().enumerate() {
        let mut r = Vec::with_capacity(n);
        for (b, s) in row.iter().enumerate() {
            r.push(parse_expr(s, table, sub, &format!("{label}[{a}][{b}]"))?);
        }
        comps.push(r);
    }
    for a in 0..n {
        for b in a + 1..n {
            if comps[a][b] != comps[b][a] {
                return Err(input(format!(
                    "{label}: not symmetric, {label}[{a}][{b}] = '{}' but {label}[{b}][{a}] = '{}'",
                    rows[a][b], rows[b][a]
                )));
            }
        }
    }
    Metric::new(coords.to_vec(), comps, role).map_err(|e| input(format!("{label}: {e}")))
}

fn check_names(names: &[String], what: &str) -> Result<(), CliError> {
    for (i, n) in names.iter().enumerate() {
        let ok = n.chars().next().is_some_and(|c| c.is_ascii_alphabetic()) && n.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
        if !ok {
            return Err(input(format!("{what}[{i}]: '{n}' is not an identifier")));
        }
        if names[..i].contains(n) {
            return Err(input(format!("{what}[{i}]: '{n}' repeated")));
        }
    }
    Ok(())
}

impl Problem {
    pub fn load(path: &Path, seed: Option<u64>) -> Result<Problem, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| input(format!("{}: {e}", path.display())))?;
        let file: ProblemFile = serde_json::from_str(&text).map_err(|e| input(format!("{}: {e}", path.display())))?;
        let name = path.file_stem().and_then(|s| s.to_str()).unwrap_or("problem").to_string();
        Problem::from_file(name, file, seed)
    }

    pub fn from_file(name: String, file: ProblemFile, seed: Option<u64>) -> Result<Problem, CliError> {
        check_names(&file.x, "x")?;
        check_names(&file.u, "u")?;
        let mut table = SymbolTable::new();
        for x in &file.x {
            table.insert(x, SymbolClass::CoordX);
        }
        for u in &file.u {
            if file.x.contains(u) {
                return Err(input(format!("u: '{u}' is also an independent variable")));
            }
            table.insert(u, SymbolClass::CoordU);
        }
        let mut sub = Substitution::new();
        let mut fixture = Bindings::new();
        for (p, v) in &file.parameters {
            if file.x.contains(p) || file.u.contains(p) {
                return Err(input(format!("parameters: '{p}' is also a coordinate")));
            }
            if let Some(v) = v {
                let q = parse_rational(v, &format!("parameters.{p}"))?;
                sub.insert(Symbol::param(p), Expr::rational(q.clone()));
                fixture.set_exact(p, q);
            }
        }
        let xs: Vec<Symbol> = file.x.iter().map(|s| table.symbol(s)).collect();
        let us: Vec<Symbol> = file.u.iter().map(|s| table.symbol(s)).collect();
        let g = match &file.g {
            Some(rows) => Some(matrix(rows, &xs, Role::Base, "g", &table, &sub)?),
            None => None,
        };
        let h = match &file.h {
            Some(rows) => Some(matrix(rows, &us, Role::Field, "H", &table, &sub)?),
            None => None,
        };
        if g.is_none() && h.is_none() {
            return Err(input("problem file declares neither g nor H"));
        }
        let settings = Settings::new(&file.options, seed);
        let system = match (&g, &h) {
            (Some(g), Some(h)) => {
                let sys = match (&file.v, &file.f) {
                    (Some(_), Some(_)) => return Err(input("give either V or F, not both")),
                    (v, None) => {
                        let v = match v {
                            Some(s) => parse_expr(s, &table, &sub, "V")?,
                            None => Expr::zero(),
                        };
                        euler_lagrange(g.clone(), h.clone(), v)
                    }
                    (None, Some(f)) => {
                        let f = f.iter().enumerate().map(|(a, s)| parse_expr(s, &table, &sub, &format!("F[{a}]"))).collect::<Result<Vec<_>, _>>()?;
                        QuasilinearSystem::new(g.clone(), h.clone(), f, None)
                    }
                };
                Some(sys.map_err(|e| input(e.to_string()))?.with_zero_test(settings.zero.clone()))
            }
            _ => {
                if file.v.is_some() || file.f.is_some() {
                    return Err(input("V or F given without both metrics"));
                }
                None
            }
        };
        Ok(Problem { name, g, h, system, table, fixture, settings })
    }

    pub fn system(&self) -> Result<&QuasilinearSystem, CliError> {
        self.system.as_ref().ok_or_else(|| input("this command needs both g and H"))
    }
}
