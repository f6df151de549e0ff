//! Reports as JSON values, and a plain-text view of the same values.

use collineate::assembler::{Bounds, LabelledGenerator, SymmetryReport};
use collineate::cases::{FieldSolution, Mode, ResidualReport};
use collineate::collineations::{AnsatzSpec, CollineationSet, Gradient};
use collineate::expr::Expr;
use collineate::geometry::{Metric, VField};
use collineate::symmetry::{Current, Generator, LieCheckResult, NoetherResult, NoetherVerdict, QuasilinearSystem};
use serde_json::{json, Map, Value};

const EXCERPT: usize = 3;
const INLINE: usize = 100;

fn s(e: &Expr) -> Value {
    Value::String(e.to_string())
}

fn list(es: &[Expr]) -> Value {
    Value::Array(es.iter().map(s).collect())
}

fn field(v: &VField) -> Value {
    let names: Vec<&str> = v.coords.iter().map(|c| c.name()).collect();
    let mut m = Map::new();
    for (n, c) in names.iter().zip(&v.comps) {
        m.insert((*n).to_string(), s(c));
    }
    Value::Object(m)
}

fn generator(g: &Generator, sys: &QuasilinearSystem) -> Value {
    let text: Vec<String> = sys
        .x()
        .iter()
        .zip(&g.xi)
        .chain(sys.u().iter().zip(&g.eta))
        .filter(|(_, c)| !c.is_zero())
        .map(|(x, c)| format!("({c}) d/d{}", x.name()))
        .collect();
    json!({
        "label": g.label,
        "xi": list(&g.xi),
        "eta": list(&g.eta),
        "vector": if text.is_empty() { "0".to_string() } else { text.join(" + ") },
    })
}

fn current(c: &Current) -> Value {
    json!({ "i": list(&c.i), "a": list(&c.a) })
}

fn labelled(l: &LabelledGenerator, sys: &QuasilinearSystem) -> Value {
    let mut v = generator(&l.generator, sys);
    let o = v.as_object_mut().expect("object");
    o.insert("from".into(), Value::String(l.provenance.clone()));
    o.insert("probabilistic".into(), Value::Bool(l.probabilistic));
    if let Some(a) = &l.gauge {
        o.insert("gauge".into(), list(a));
    }
    if let Some(c) = &l.current {
        o.insert("current".into(), current(c));
    }
    v
}

pub fn collineations(problem: &str, label: &str, m: &Metric, a: &AnsatzSpec, set: &CollineationSet) -> Value {
    let elements: Vec<Value> = set
        .fields
        .iter()
        .map(|c| {
            let mut o = Map::new();
            o.insert("field".into(), field(&c.field));
            o.insert("psi".into(), s(&c.psi));
            if let Some(h) = &c.homothety {
                o.insert("homothety".into(), s(h));
            }
            let (grad, pot) = match &c.gradient {
                Gradient::Gradient(p) => ("yes", Some(s(p))),
                Gradient::PotentialUnavailable => ("yes, potential unavailable", None),
                Gradient::NonGradient => ("no", None),
            };
            o.insert("gradient".into(), Value::String(grad.into()));
            if let Some(p) = pot {
                o.insert("potential".into(), p);
            }
            Value::Object(o)
        })
        .collect();
    let tensors: Vec<Value> =
        set.tensors.iter().map(|t| Value::Array(t.comps.iter().map(|r| list(r)).collect())).collect();
    let mut v = json!({
        "schema": 1,
        "command": "collineations",
        "problem": problem,
        "metric": label,
        "coordinates": m.coords().iter().map(|c| c.name()).collect::<Vec<_>>(),
        "kind": set.kind.to_string(),
        "dimension": set.dim(),
        "complete": set.complete,
        "known_max": set.known_max,
        "infinite_conformal": set.infinite_conformal,
        "ansatz": { "degree": a.degree(), "window": [a.window().0, a.window().1], "size": set.ansatz_size },
    });
    let o = v.as_object_mut().expect("object");
    if set.tensors.is_empty() {
        o.insert("elements".into(), Value::Array(elements));
    } else {
        o.insert("tensors".into(), Value::Array(tensors));
    }
    v
}

pub fn symmetries(problem: &str, sys: &QuasilinearSystem, r: &SymmetryReport, noether: bool, bounds: Option<&Bounds>) -> Value {
    let mut v = json!({
        "schema": 1,
        "command": "symmetries",
        "problem": problem,
        "n": sys.n(),
        "m": sys.m(),
        "branch": r.branch.to_string(),
        "proper_hv": r.proper_hv.as_ref().map(field),
        "lie": r.lie.iter().map(|l| labelled(l, sys)).collect::<Vec<_>>(),
        "lie_count": r.lie_count(),
        "transcript": r.transcript,
    });
    let o = v.as_object_mut().expect("object");
    if noether {
        o.insert("noether".into(), Value::Array(r.noether.iter().map(|l| labelled(l, sys)).collect()));
        o.insert("noether_count".into(), json!(r.noether_count()));
    }
    if let Some(k) = r.killing_tensors {
        o.insert("killing_tensors".into(), json!(k));
    }
    if let Some(f) = &r.family {
        let mut fam = generator(&f.generator, sys);
        let fo = fam.as_object_mut().expect("object");
        fo.insert("pde".into(), list(&f.pde));
        fo.insert("counted".into(), json!(f.counted));
        fo.insert("lie".into(), json!(f.lie));
        fo.insert("noether".into(), json!(f.noether));
        if let Some(a) = &f.gauge {
            fo.insert("gauge".into(), list(a));
        }
        o.insert("family".into(), fam);
    }
    if let Some(b) = bounds {
        o.insert(
            "bounds".into(),
            json!({ "lie_upper": b.lie_upper, "noether_upper": b.noether_upper, "lower": b.lower }),
        );
    }
    v
}

pub fn generator_verdict(
    problem: &str,
    g: &Generator,
    lie: &LieCheckResult,
    noether: Option<&(NoetherResult, Option<Current>, Option<bool>)>,
    passed: bool,
) -> Value {
    let residual: Vec<Value> = lie.residual.iter().filter(|e| !e.is_zero()).take(EXCERPT).map(s).collect();
    let mut v = json!({
        "schema": 1,
        "command": "verify",
        "problem": problem,
        "generator": { "xi": list(&g.xi), "eta": list(&g.eta) },
        "passed": passed,
        "lie": {
            "verdict": lie.verdict,
            "probabilistic": lie.probabilistic,
            "kappa": lie.kappa.iter().map(|r| list(r)).collect::<Vec<_>>(),
            "residual": residual,
            "reason": lie.reason,
        },
    });
    if let Some((r, c, conserved)) = noether {
        let verdict = match r.verdict {
            NoetherVerdict::Noether => "noether",
            NoetherVerdict::NotNoether => "not noether",
            NoetherVerdict::GaugeUnavailable => "gauge unavailable",
        };
        let res: Vec<Value> = r.residual.iter().filter(|e| !e.is_zero()).take(EXCERPT).map(s).collect();
        let mut n = json!({
            "verdict": verdict,
            "probabilistic": r.probabilistic,
            "residual": res,
            "reason": r.reason,
        });
        let no = n.as_object_mut().expect("object");
        if let Some(a) = &r.gauge {
            no.insert("gauge".into(), list(a));
        }
        if let Some(c) = c {
            no.insert("current".into(), current(c));
        }
        if let Some(ok) = conserved {
            no.insert("conserved_on_shell".into(), json!(ok));
        }
        v.as_object_mut().expect("object").insert("noether".into(), n);
    }
    v
}

pub fn solution_verdict(problem: &str, sol: &FieldSolution, r: &ResidualReport) -> Value {
    json!({
        "schema": 1,
        "command": "verify",
        "problem": problem,
        "solution": r.name,
        "mode": match r.mode { Mode::Symbolic => "symbolic", Mode::Numeric => "numeric" },
        "passed": r.passed,
        "probabilistic": r.probabilistic,
        "max_residual": r.max_residual,
        "per_equation": r.per_equation,
        "points_used": r.points_used,
        "skipped": r.skipped,
        "tol": r.tol,
        "notes": sol.notes,
    })
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(a) if a.iter().all(|x| !x.is_array() && !x.is_object()) => {
            let t = format!("[{}]", a.iter().filter_map(scalar).collect::<Vec<_>>().join(", "));
            (t.len() <= INLINE).then_some(t)
        }
        _ => None,
    }
}

fn walk(v: &Value, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                if k == "schema" {
                    continue;
                }
                match scalar(x) {
                    Some(t) => out.push_str(&format!("{pad}{k}: {t}\n")),
                    None => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        walk(x, depth + 1, out);
                    }
                }
            }
        }
        Value::Array(a) => {
            for (i, x) in a.iter().enumerate() {
                match scalar(x) {
                    Some(t) => out.push_str(&format!("{pad}{}. {t}\n", i + 1)),
                    None => {
                        out.push_str(&format!("{pad}{}.\n", i + 1));
                        walk(x, depth + 1, out);
                    }
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", scalar(other).unwrap_or_default())),
    }
}

/// Indented `key: value` lines.
pub fn text(v: &Value) -> String {
    let mut out = String::new();
    walk(v, 0, &mut out);
    out
}
