use std::fmt::Write;

use serde_json::{json, Value};
use tmodel::chain::PComplex;
use tmodel::io::{complex_to_doc, module_record, module_text};
use tmodel::linalg::Module;
use tmodel::site::{FinSpace, OpenId};

/// What a subcommand produces: a text rendering, a structured record and an exit status.
pub struct Report {
    pub text: String,
    pub value: Value,
    pub code: i32,
}

impl Report {
    pub fn ok(text: String, value: Value) -> Report {
        Report { text, value, code: 0 }
    }
}

pub fn open_name(space: &FinSpace, u: OpenId) -> String {
    space.format_set(space.open(u))
}

fn width(space: &FinSpace) -> usize {
    (0..space.nopens()).map(|u| open_name(space, u).chars().count()).max().unwrap_or(0)
}

/// `label  module` lines for every open.
pub fn open_table(space: &FinSpace, indent: &str, module: impl Fn(OpenId) -> Module) -> String {
    let w = width(space);
    let mut out = String::new();
    for u in 0..space.nopens() {
        let name = open_name(space, u);
        let pad = w - name.chars().count();
        writeln!(out, "{indent}{name}{}  {}", " ".repeat(pad), module_text(&module(u))).unwrap();
    }
    out
}

pub fn open_records(space: &FinSpace, module: impl Fn(OpenId) -> Module) -> Value {
    Value::Array(
        (0..space.nopens())
            .map(|u| json!({"open": open_name(space, u), "module": module_record(&module(u))}))
            .collect(),
    )
}

/// Every nonzero degree of `x`, open by open.
pub fn complex_text(x: &PComplex) -> String {
    let space = x.space();
    let mut out = String::new();
    let Some((lo, hi)) = x.support_range() else {
        return "  0\n".into();
    };
    for k in lo..=hi {
        writeln!(out, "  degree {k}:").unwrap();
        out.push_str(&open_table(space, "    ", |u| x.module(k, u).clone()));
    }
    out
}

/// Module records per degree and open, plus the complex as a document.
pub fn complex_value(x: &PComplex) -> Value {
    let space = x.space();
    let degrees: Vec<Value> = match x.support_range() {
        None => Vec::new(),
        Some((lo, hi)) => {
            (lo..=hi).map(|k| json!({"degree": k, "opens": open_records(space, |u| x.module(k, u).clone())})).collect()
        }
    };
    json!({"degrees": degrees, "document": complex_to_doc(x)})
}

pub fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}
