use std::sync::Arc;

use proptest::prelude::*;
use tmodel::chain::{sphere, unit_interval, ChainMap, PComplex};
use tmodel::io::*;
use tmodel::linalg::Ring;
use tmodel::random::{random_complex, random_map, rng, MapKind, Params};
use tmodel::site::{DFunction, ExtInt, FinSpace, PointSet};
use tmodel::Error;

fn sierp() -> Arc<FinSpace> {
    Arc::new(parse_site(r#"{"points": ["o", "c"], "opens": [["o"], ["o", "c"]]}"#).unwrap())
}

#[test]
fn site_documents() {
    let s = sierp();
    assert_eq!(*s, FinSpace::sierpinski());
    assert_eq!(s.min_open(1), s.all_points());
    let three =
        parse_site(r#"{"points": ["a", "b", "c"], "opens": [["a"], ["b"], ["a", "b"], ["a", "b", "c"]]}"#).unwrap();
    assert_eq!(three.nopens(), 4);
    assert_eq!(parse_site(&site_to_json(&three)).unwrap(), three);
    let missing = parse_site(r#"{"points": ["a", "b"], "opens": [["a"]]}"#).unwrap_err();
    assert!(missing.to_string().contains("lattice not closed under union"), "{missing}");
    let dup = parse_site(r#"{"points": ["a", "a"], "opens": [["a"]]}"#).unwrap_err();
    assert!(matches!(dup, Error::InvalidSite(_)));
    let t0 = parse_site(r#"{"points": ["a", "b"], "opens": [["a", "b"]]}"#).unwrap_err();
    assert!(t0.to_string().contains("T0"), "{t0}");
    assert!(matches!(parse_site("{points: 1}"), Err(Error::Parse(_))));
}

#[test]
fn dfunction_and_strata_documents() {
    let s = sierp();
    let d = parse_dfunction(r#"{"o": 1, "c": "-inf"}"#, &s).unwrap();
    assert_eq!(d, DFunction::new(vec![ExtInt::Fin(1), ExtInt::NegInf]));
    assert_eq!(parse_dfunction(&dfunction_to_json(&d, &s), &s).unwrap(), d);
    assert!(parse_dfunction(r#"{"o": 1}"#, &s).is_err());
    assert!(parse_dfunction(r#"{"o": 1, "c": "many"}"#, &s).is_err());
    let st = parse_stratification(
        r#"{"strata": [{"points": ["o"], "perversity": 1}, {"points": ["c"], "perversity": 0}]}"#,
        &s,
    )
    .unwrap();
    assert_eq!(st.strata, vec![PointSet::singleton(0), PointSet::singleton(1)]);
    assert_eq!(parse_stratification(&stratification_to_json(&st, &s), &s).unwrap(), st);
}

#[test]
fn complex_documents() {
    let s = sierp();
    let z = Ring::Integers;
    let r0 = parse_complex(
        r#"{"terms": [{"degree": 0, "values": [{"open": ["o"], "rank": 1}, {"open": ["o", "c"], "rank": 1}],
            "restrictions": [{"from": ["o", "c"], "to": ["o"], "matrix": [[1]]}]}]}"#,
        &s,
        z,
    )
    .unwrap();
    assert_eq!(r0, sphere(&s, z, s.all_points(), 0).unwrap());

    let u_doc = r#"{"terms": [
        {"degree": 1, "values": [{"open": ["o"], "rank": 1}, {"open": ["o", "c"], "rank": 1}],
         "restrictions": [{"from": ["o", "c"], "to": ["o"], "matrix": [[1]]}],
         "differential": [{"open": ["o"], "matrix": [[1], [-1]]}, {"open": ["o", "c"], "matrix": [[1], [-1]]}]},
        {"degree": 0, "values": [{"open": ["o"], "rank": 2}, {"open": ["o", "c"], "rank": 2}],
         "restrictions": [{"from": ["o", "c"], "to": ["o"], "matrix": [[1, 0], [0, 1]]}]}]}"#;
    assert_eq!(parse_complex(u_doc, &s, z).unwrap(), unit_interval(&s, z));

    let bad = r#"{"terms": [
        {"degree": 2, "values": [{"open": ["o"], "rank": 1}], "differential": [{"open": ["o"], "matrix": [[1]]}]},
        {"degree": 1, "values": [{"open": ["o"], "rank": 1}], "differential": [{"open": ["o"], "matrix": [[1]]}]},
        {"degree": 0, "values": [{"open": ["o"], "rank": 1}]}]}"#;
    let e = parse_complex(bad, &s, z).unwrap_err().to_string();
    assert!(e.contains("degree 2") && e.contains("{o}"), "{e}");

    let unbounded = r#"{"terms": [{"degree": "-inf", "values": []}]}"#;
    assert!(parse_complex(unbounded, &s, z).unwrap_err().to_string().contains("bounded"));
    let ring = r#"{"ring": "Q", "terms": []}"#;
    assert!(matches!(parse_complex(ring, &s, z), Err(Error::RingMismatch(_))));
}

#[test]
fn general_presentations() {
    let s = sierp();
    let z = Ring::Integers;
    // Z^2 / (2, 4) ≅ Z ⊕ Z/2 mapping to Z/3 by (1, 1)
    let doc = r#"{"terms": [
        {"degree": 1, "values": [{"open": ["o"], "rank": 2, "relations": [[2, 4]]}],
         "differential": [{"open": ["o"], "matrix": [[1, 1]]}]},
        {"degree": 0, "values": [{"open": ["o"], "rank": 1, "relations": [[3]]}]}]}"#;
    let x = parse_complex(doc, &s, z).unwrap();
    let m = x.module(1, s.open_id(PointSet::singleton(0)).unwrap());
    assert_eq!(module_text(m), "Z ⊕ Z/2");
    assert_eq!(parse_complex(&complex_to_json(&x), &s, z).unwrap(), x);
    let ill = doc.replace("[[1, 1]]", "[[1, 2]]");
    assert!(parse_complex(&ill, &s, z).unwrap_err().to_string().contains("relations"));
}

#[test]
fn map_documents() {
    let s = sierp();
    let z = Ring::Integers;
    let doc = format!(
        r#"{{"source": {src}, "target": {src}, "components": [{{"degree": 0, "open": ["o"], "matrix": [[3]]}}, {{"degree": 0, "open": ["o", "c"], "matrix": [[3]]}}]}}"#,
        src = complex_to_json(&sphere(&s, z, s.all_points(), 0).unwrap())
    );
    let f = parse_map(&doc, &s, z).unwrap();
    assert_eq!(f, ChainMap::identity(&f.source).scale(&z.from_i64(3)));
    let bad = doc.replacen("[[3]]", "[[2]]", 1);
    assert!(parse_map(&bad, &s, z).is_err());
}

#[test]
fn module_records() {
    let s = sierp();
    let x: PComplex = sphere(&s, Ring::Rationals, s.all_points(), 0).unwrap();
    let r = module_record(x.module(0, 0));
    assert_eq!(r["free_rank"], 1);
    assert_eq!(module_text(x.module(0, 0)), "Q");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn complexes_round_trip(seed in 0u64..10_000, ring in prop_oneof![Just(Ring::Integers), Just(Ring::Rationals), Just(Ring::PrimeField(3))], three in any::<bool>()) {
        let s = Arc::new(if three { FinSpace::three_point() } else { FinSpace::sierpinski() });
        let x = random_complex(&s, ring, &mut rng(seed), Params::default());
        let text = complex_to_json(&x);
        let y = parse_complex(&text, &s, ring).unwrap();
        prop_assert_eq!(&y, &x);
        prop_assert_eq!(complex_to_json(&y), text);
    }

    #[test]
    fn maps_round_trip(seed in 0u64..10_000) {
        let s = Arc::new(FinSpace::sierpinski());
        let f = random_map(&s, Ring::Integers, &mut rng(seed), Params::default(), MapKind::Generic);
        let g = parse_map(&map_to_json(&f), &s, Ring::Integers).unwrap();
        let (lo, hi) = g.degree_range();
        for n in lo - 1..=hi + 1 {
            for u in 0..s.nopens() {
                prop_assert_eq!(g.component(n, u), f.component(n, u));
            }
        }
        prop_assert_eq!(g.source.trimmed(), f.source.trimmed());
    }
}
