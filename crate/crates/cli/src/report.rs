//! Report files: a deterministic record of a command, its inputs, the
//! computed values and the checks performed on them.

use serde_json::{json, Value};

use skewrank_core::identifiability::{SecantDecomposition, TangentWitness};
use skewrank_core::rational::{self, Rational};
use skewrank_core::{GrassPoint, Multivector, RationalMatrix, Subspace};

use crate::io::{SubspaceFile, TensorFile};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub detail: String,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub command: String,
    pub arguments: Vec<(String, String)>,
    pub input_digests: Vec<String>,
    pub seed: u64,
    pub result: Value,
    pub text: Vec<String>,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(command: &str, seed: u64) -> Self {
        Report {
            command: command.to_string(),
            arguments: Vec::new(),
            input_digests: Vec::new(),
            seed,
            result: json!({}),
            text: Vec::new(),
            checks: Vec::new(),
        }
    }

    pub fn arg(&mut self, name: &str, value: impl ToString) {
        self.arguments.push((name.to_string(), value.to_string()));
    }

    pub fn line(&mut self, s: impl Into<String>) {
        self.text.push(s.into());
    }

    pub fn check(&mut self, name: &str, detail: impl Into<String>, passed: bool) {
        self.checks.push(Check { name: name.to_string(), detail: detail.into(), passed });
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn to_json_value(&self) -> Value {
        let arguments: serde_json::Map<String, Value> =
            self.arguments.iter().map(|(k, v)| (k.clone(), Value::String(v.clone()))).collect();
        let checks: Vec<Value> = self
            .checks
            .iter()
            .map(|c| json!({"name": c.name, "detail": c.detail, "passed": c.passed}))
            .collect();
        json!({
            "command": self.command,
            "arguments": arguments,
            "input_digests": self.input_digests,
            "seed": self.seed,
            "result": self.result,
            "checks": checks,
            "verified": self.all_passed(),
        })
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json_value()).expect("serialisable");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("command: {}\n", self.command));
        for (k, v) in &self.arguments {
            out.push_str(&format!("  {k} = {v}\n"));
        }
        for d in &self.input_digests {
            out.push_str(&format!("input: {d}\n"));
        }
        out.push_str(&format!("seed: {}\n", self.seed));
        for l in &self.text {
            out.push_str(l);
            out.push('\n');
        }
        for c in &self.checks {
            let mark = if c.passed { "ok" } else { "FAILED" };
            out.push_str(&format!("[{mark}] {}: {}\n", c.name, c.detail));
        }
        out
    }
}

pub fn rational_value(r: &Rational) -> Value {
    Value::String(rational::format(r))
}

pub fn tensor_value(t: &Multivector) -> Value {
    serde_json::to_value(TensorFile::from_multivector(t)).expect("serialisable")
}

pub fn subspace_value(s: &Subspace) -> Value {
    let f = SubspaceFile::from_subspace(s);
    json!({"n": f.n, "dim": s.dim(), "basis": f.basis})
}

pub fn point_value(p: &GrassPoint) -> Value {
    json!({"subspace": subspace_value(p.space()), "pluecker": tensor_value(p.pluecker())})
}

pub fn matrix_value(m: &RationalMatrix) -> Value {
    let rows: Vec<Vec<String>> = m.to_rows().iter().map(|r| r.iter().map(rational::format).collect()).collect();
    json!(rows)
}

pub fn decomposition_value(d: &SecantDecomposition) -> Value {
    json!({
        "p": point_value(&d.p),
        "q": point_value(&d.q),
        "coeff_p": rational_value(&d.coeff_p),
        "coeff_q": rational_value(&d.coeff_q),
        "unique": d.unique,
        "distance": d.distance(),
    })
}

pub fn tangent_value(w: &TangentWitness) -> Value {
    json!({
        "point": point_value(&w.point),
        "base_coeff": rational_value(&w.base_coeff),
        "displacement": matrix_value(&w.displacement),
        "rank": w.rank,
    })
}

/// One-line description of a subspace by its echelon basis.
pub fn subspace_text(s: &Subspace) -> String {
    if s.dim() == 0 {
        return "0".to_string();
    }
    let rows: Vec<String> = s
        .basis_vectors()
        .iter()
        .map(|v| format!("({})", v.iter().map(rational::format).collect::<Vec<_>>().join(",")))
        .collect();
    format!("span{{{}}}", rows.join(", "))
}

pub fn decomposition_text(d: &SecantDecomposition) -> Vec<String> {
    vec![
        format!("  p = {}", subspace_text(d.p.space())),
        format!("  q = {}", subspace_text(d.q.space())),
        format!(
            "  t = ({}) pl(p) + ({}) pl(q), d(p,q) = {}, unique = {}",
            rational::format(&d.coeff_p),
            rational::format(&d.coeff_q),
            d.distance(),
            d.unique
        ),
    ]
}
