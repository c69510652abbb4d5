use std::fmt::Write;
use std::path::Path;
use std::sync::Arc;

use serde_json::{json, Value};
use tmodel::chain::{
    chain_maps, classify, cokernel_complex, homology, homotopy_classes, sheafify_complex, tensor_total,
};
use tmodel::io::{module_record, module_text};
use tmodel::model::{
    factor_cof_acyclicfib, is_acyclic_fibration, is_fibration, rlp_failures, verify_axiom, AxiomKind, GenKind,
    SampleSpec,
};
use tmodel::presheaf::{free_decomposition, is_sheaf, stalk};
use tmodel::random::Params;
use tmodel::site::{FinSpace, OpenId};
use tmodel::tstruct::{
    factor_t, heart_project, in_d_geq0, in_d_leq0, is_co_n_equivalence, is_n_equivalence, perverse_geq0_direct,
    perverse_leq0_direct, truncate, TStructure,
};

use crate::report::{complex_text, complex_value, open_name, open_records, open_table, yes_no, Report};
use crate::workspace::{CliResult, Failure, Workspace, PROPERTY};

fn op<T>(r: tmodel::Result<T>) -> CliResult<T> {
    r.map_err(Failure::from_operation)
}

pub fn homology_cmd(ws: &Workspace, file: &Path, degree: Option<i64>) -> CliResult<Report> {
    let x = ws.complex(file)?;
    let space = x.space();
    let degrees: Vec<i64> = match degree {
        Some(k) => vec![k],
        None => match x.support_range() {
            Some((lo, hi)) => (lo..=hi).collect(),
            None => Vec::new(),
        },
    };
    let mut text = String::new();
    let mut records = Vec::new();
    for k in degrees {
        let h = homology(&x, k);
        writeln!(text, "H_{k}:").unwrap();
        text.push_str(&open_table(space, "  ", |u| h.value(u).clone()));
        let stalks: Vec<Value> = (0..space.npoints())
            .map(|p| json!({"point": space.point_names()[p], "module": module_record(&stalk(&h, p))}))
            .collect();
        for p in 0..space.npoints() {
            writeln!(text, "  stalk at {}: {}", space.point_names()[p], module_text(&stalk(&h, p))).unwrap();
        }
        records.push(json!({"degree": k, "opens": open_records(space, |u| h.value(u).clone()), "stalks": stalks}));
    }
    Ok(Report::ok(text, json!({"homology": records})))
}

pub fn classify_cmd(ws: &Workspace, file: &Path) -> CliResult<Report> {
    let f = ws.map(file)?;
    let r = classify(&f);
    let mut text = String::new();
    writeln!(text, "presheaf quasi-isomorphism: {}", yes_no(r.presheaf_iso)).unwrap();
    writeln!(text, "sheaf quasi-isomorphism: {}", yes_no(r.sheaf_iso)).unwrap();
    writeln!(text, "stalkwise quasi-isomorphism: {}", yes_no(r.stalkwise_iso)).unwrap();
    for w in &r.witnesses {
        writeln!(
            text,
            "  {:?} H_{} at {}: injective={} surjective={}",
            w.level, w.degree, w.location, w.injective, w.surjective
        )
        .unwrap();
    }
    Ok(Report::ok(text, serde_json::to_value(&r).expect("report serializes")))
}

pub fn sheafify_cmd(ws: &Workspace, file: &Path) -> CliResult<Report> {
    let x = ws.complex(file)?;
    let (lx, unit) = sheafify_complex(&x);
    let already: Vec<Value> =
        (x.lo()..=x.hi()).map(|k| json!({"degree": k, "is_sheaf": is_sheaf(x.term(k))})).collect();
    let stalkwise = classify(&unit).stalkwise_iso;
    let mut text = String::new();
    for k in x.lo()..=x.hi() {
        writeln!(text, "degree {k} is a sheaf: {}", yes_no(is_sheaf(x.term(k)))).unwrap();
    }
    writeln!(text, "unit X → LX stalkwise quasi-isomorphism: {}", yes_no(stalkwise)).unwrap();
    writeln!(text, "sheafification:").unwrap();
    text.push_str(&complex_text(&lx));
    Ok(Report::ok(
        text,
        json!({"input_terms": already, "unit_stalkwise_iso": stalkwise, "sheafification": complex_value(&lx)}),
    ))
}

fn generator_list(space: &FinSpace, gens: &[(OpenId, i64)]) -> Value {
    Value::Array(gens.iter().map(|&(u, n)| json!({"open": open_name(space, u), "degree": n})).collect())
}

fn generator_text(space: &FinSpace, gens: &[(OpenId, i64)]) -> String {
    let items: Vec<String> = gens.iter().map(|&(u, n)| format!("({}, {n})", open_name(space, u))).collect();
    if items.is_empty() {
        "none".into()
    } else {
        items.join(" ")
    }
}

pub fn lift_cmd(ws: &Workspace, file: &Path) -> CliResult<Report> {
    let f = ws.map(file)?;
    let space = f.source.space();
    let (fib, afib) = (is_fibration(&f), is_acyclic_fibration(&f));
    let (fj, fi) = (rlp_failures(&f, GenKind::J), rlp_failures(&f, GenKind::I));
    let agree = fib == fj.is_empty() && afib == fi.is_empty();
    let mut text = String::new();
    writeln!(text, "fibration: {}", yes_no(fib)).unwrap();
    writeln!(text, "lifts against every j: {}", yes_no(fj.is_empty())).unwrap();
    writeln!(text, "  failing j generators (open, degree): {}", generator_text(space, &fj)).unwrap();
    writeln!(text, "acyclic fibration: {}", yes_no(afib)).unwrap();
    writeln!(text, "lifts against every i: {}", yes_no(fi.is_empty())).unwrap();
    writeln!(text, "  failing i generators (open, degree): {}", generator_text(space, &fi)).unwrap();
    let value = json!({
        "fibration": fib,
        "acyclic_fibration": afib,
        "j_failures": generator_list(space, &fj),
        "i_failures": generator_list(space, &fi),
        "agreement": agree,
    });
    let code = if agree { 0 } else { PROPERTY };
    if !agree {
        writeln!(text, "lifting property and levelwise criteria disagree").unwrap();
    }
    Ok(Report { text, value, code })
}

pub fn factor_cmd(ws: &Workspace, file: &Path) -> CliResult<Report> {
    let f = ws.map(file)?;
    let space = f.source.space();
    let fac = op(factor_cof_acyclicfib(&f))?;
    let composite = fac.second.compose(&fac.first) == f;
    let (q, _) = cokernel_complex(&fac.first);
    let free = q.terms().iter().all(|t| free_decomposition(t).is_some());
    let afib = is_acyclic_fibration(&fac.second);
    let mut text = String::new();
    writeln!(text, "attached cells (open, degree): {}", generator_text(space, &fac.cells)).unwrap();
    writeln!(text, "second ∘ first = f: {}", yes_no(composite)).unwrap();
    writeln!(text, "first has levelwise free cokernel: {}", yes_no(free)).unwrap();
    writeln!(text, "second is an acyclic fibration: {}", yes_no(afib)).unwrap();
    writeln!(text, "middle:").unwrap();
    text.push_str(&complex_text(&fac.middle));
    let ok = composite && free && afib;
    let value = json!({
        "cells": generator_list(space, &fac.cells),
        "composite_equal": composite,
        "first_free_cokernel": free,
        "second_acyclic_fibration": afib,
        "middle": complex_value(&fac.middle),
    });
    Ok(Report { text, value, code: if ok { 0 } else { PROPERTY } })
}

fn tstructure(ws: &Workspace, d: Option<&Path>, shift: i64) -> CliResult<TStructure> {
    let d = ws.dfunction(d)?;
    Ok(TStructure::new(ws.space()?.clone(), d)?.shifted(shift))
}

fn flags(t: &TStructure) -> Value {
    json!({"admissible": t.admissible, "truncatable": t.truncatable})
}

pub fn truncate_cmd(ws: &Workspace, file: &Path, d: Option<&Path>, degree: Option<i64>) -> CliResult<Report> {
    let x = ws.complex(file)?;
    let n = degree.unwrap_or(0);
    let t = tstructure(ws, d, n)?;
    let tri = op(truncate(&x, &t))?;
    let mut text = String::new();
    writeln!(text, "X_{{≥{n}}}:").unwrap();
    text.push_str(&complex_text(&tri.below));
    writeln!(text, "X_{{≤{}}}:", n - 1).unwrap();
    text.push_str(&complex_text(&tri.above));
    let value = json!({
        "degree": n,
        "t_structure": flags(&t),
        "below": complex_value(&tri.below),
        "above": complex_value(&tri.above),
    });
    Ok(Report::ok(text, value))
}

pub fn member_cmd(ws: &Workspace, file: &Path, d: Option<&Path>, degree: Option<i64>) -> CliResult<Report> {
    let x = ws.complex(file)?;
    let n = degree.unwrap_or(0);
    let t = tstructure(ws, d, n)?;
    let (geq, leq) = (in_d_geq0(&x, &t), in_d_leq0(&x, &t));
    let text = format!("in D_{{≥{n}}}: {}\nin D_{{≤{n}}}: {}\n", yes_no(geq), yes_no(leq));
    Ok(Report::ok(text, json!({"degree": n, "geq": geq, "leq": leq, "t_structure": flags(&t)})))
}

pub fn heart_cmd(ws: &Workspace, file: &Path, d: Option<&Path>) -> CliResult<Report> {
    let x = ws.complex(file)?;
    let t = tstructure(ws, d, 0)?;
    let h = op(heart_project(&x, &t))?;
    let text = format!("(X_{{≥0}})_{{≤0}}:\n{}", complex_text(&h));
    Ok(Report::ok(text, json!({"heart": complex_value(&h)})))
}

pub fn tfactor_cmd(ws: &Workspace, file: &Path, d: Option<&Path>, degree: Option<i64>) -> CliResult<Report> {
    let f = ws.map(file)?;
    let n = degree.unwrap_or(0);
    let t = tstructure(ws, d, 0)?;
    let fac = op(factor_t(&f, &t, n))?;
    let composite = fac.h.compose(&fac.g) == f;
    let g_ok = is_n_equivalence(&fac.g, &t, n);
    let h_ok = is_co_n_equivalence(&fac.h, &t, n);
    let mut text = String::new();
    writeln!(text, "h ∘ g = f: {}", yes_no(composite)).unwrap();
    writeln!(text, "g is a {n}-equivalence: {}", yes_no(g_ok)).unwrap();
    writeln!(text, "h is a co-{n}-equivalence: {}", yes_no(h_ok)).unwrap();
    writeln!(text, "middle:").unwrap();
    text.push_str(&complex_text(&fac.middle));
    let value = json!({
        "degree": n,
        "composite_equal": composite,
        "g_n_equivalence": g_ok,
        "h_co_n_equivalence": h_ok,
        "middle": complex_value(&fac.middle),
    });
    let ok = composite && g_ok && h_ok;
    Ok(Report { text, value, code: if ok { 0 } else { PROPERTY } })
}

pub fn perverse_cmd(ws: &Workspace, file: &Path, strata: Option<&Path>) -> CliResult<Report> {
    let x = ws.complex(file)?;
    let space = ws.space()?;
    let st = ws.stratification(strata)?;
    let t = TStructure::perverse(space.clone(), &st);
    let (geq, leq) = (in_d_geq0(&x, &t), in_d_leq0(&x, &t));
    let (dgeq, dleq) = (perverse_geq0_direct(&x, &st), perverse_leq0_direct(&x, &st));
    let agree = geq == dgeq && leq == dleq;
    let d: Vec<Value> =
        (0..space.npoints()).map(|p| json!({"point": space.point_names()[p], "d": t.d.at(p).to_string()})).collect();
    let mut text = String::new();
    let dtext: Vec<String> =
        (0..space.npoints()).map(|p| format!("{}={}", space.point_names()[p], t.d.at(p))).collect();
    writeln!(text, "d: {}", dtext.join(" ")).unwrap();
    writeln!(text, "in ᵖD_{{≥0}}: {}", yes_no(geq)).unwrap();
    writeln!(text, "in ᵖD_{{≤0}}: {}", yes_no(leq)).unwrap();
    if !agree {
        writeln!(text, "stratumwise check disagrees: ≥0 {} ≤0 {}", yes_no(dgeq), yes_no(dleq)).unwrap();
    }
    let value = json!({"d": d, "geq": geq, "leq": leq, "stratumwise_agrees": agree, "t_structure": flags(&t)});
    Ok(Report { text, value, code: if agree { 0 } else { PROPERTY } })
}

pub fn tensor_cmd(ws: &Workspace, a: &Path, b: &Path) -> CliResult<Report> {
    let (x, y) = (ws.complex(a)?, ws.complex(b)?);
    let t = op(tensor_total(&x, &y))?;
    Ok(Report::ok(format!("X ⊗ Y:\n{}", complex_text(&t)), json!({"tensor": complex_value(&t)})))
}

pub fn maps_cmd(ws: &Workspace, a: &Path, b: &Path) -> CliResult<Report> {
    let (x, y) = (ws.complex(a)?, ws.complex(b)?);
    let (z, _) = chain_maps(&x, &y);
    let classes = homotopy_classes(&x, &y);
    let text = format!("chain maps: {}\nhomotopy classes: {}\n", module_text(&z), module_text(&classes));
    Ok(Report::ok(text, json!({"chain_maps": module_record(&z), "homotopy_classes": module_record(&classes)})))
}

pub fn verify_cmd(ws: &Workspace, axioms: &[String], instances: usize) -> CliResult<Report> {
    let kinds: Vec<AxiomKind> = if axioms.is_empty() || axioms.iter().any(|a| a == "all") {
        AxiomKind::ALL.to_vec()
    } else {
        axioms
            .iter()
            .map(|a| {
                AxiomKind::parse(a).ok_or_else(|| {
                    let names: Vec<&str> = AxiomKind::ALL.iter().map(|k| k.name()).collect();
                    Failure::usage(format!("unknown suite `{a}`; expected one of {} or all", names.join(", ")))
                })
            })
            .collect::<CliResult<_>>()?
    };
    let spaces: Vec<(String, Arc<FinSpace>)> = match (&ws.site, &ws.site_path) {
        (Some(s), Some(p)) => vec![(p.display().to_string(), s.clone())],
        _ => vec![
            ("sierpinski".into(), Arc::new(FinSpace::sierpinski())),
            ("three-point".into(), Arc::new(FinSpace::three_point())),
        ],
    };
    let mut text = String::new();
    let mut records = Vec::new();
    let mut all_ok = true;
    for kind in kinds {
        for (label, space) in &spaces {
            let spec =
                SampleSpec { space: space.clone(), ring: ws.ring, seed: ws.seed, instances, params: Params::default() };
            let r = verify_axiom(kind, &spec);
            let verdict = if r.all_passed() { "PASS" } else { "FAIL" };
            all_ok &= r.all_passed();
            writeln!(text, "{verdict} {} on {label}: {}/{}", kind.name(), r.passed, r.instances).unwrap();
            for fail in &r.failures {
                writeln!(text, "  seed {}: {}", fail.seed, fail.detail).unwrap();
                let site = ws.site_path.as_ref().map(|p| format!(" --site {}", p.display())).unwrap_or_default();
                writeln!(
                    text,
                    "    reproduce: tmodel verify {}{site} --ring {} --seed {} --instances 1",
                    kind.name(),
                    ws.ring,
                    fail.seed
                )
                .unwrap();
            }
            records.push(json!({
                "suite": kind.name(),
                "space": label,
                "instances": r.instances,
                "passed": r.passed,
                "failures": r.failures,
            }));
        }
    }
    let value = json!({"seed": ws.seed, "ring": ws.ring.to_string(), "pass": all_ok, "suites": records});
    Ok(Report { text, value, code: if all_ok { 0 } else { PROPERTY } })
}
