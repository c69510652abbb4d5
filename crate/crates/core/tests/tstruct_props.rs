mod common;

use proptest::prelude::*;
use rand::Rng;
use tmodel::chain::{cone, homology_map, homotopy_classes, is_stalkwise_quasi_iso, ChainMap};
use tmodel::linalg::{Mat, ModHom, Ring};
use tmodel::model::cofibrant_replacement;
use tmodel::random::{random_complex, rng, Params};
use tmodel::site::{d_is_admissible, DFunction, ExtInt, PointSet, Stratification};
use tmodel::tstruct::*;

use common::{random_truncatable_d, sierp, three};

fn exact(a: &ModHom, b: &ModHom) -> bool {
    b.compose(a).is_zero() && b.kernel().1.matrix.columns().iter().all(|v| a.solve(v).is_some())
}

fn small() -> Params {
    Params { max_rank: 2, max_len: 3, lo: -1, ..Params::default() }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn truncation_triangle(seed in 0u64..1_000_000) {
        let s = if seed % 2 == 0 { sierp() } else { three() };
        let mut r = rng(seed);
        let t = TStructure::new(s.clone(), random_truncatable_d(&s, &mut r)).unwrap();
        let x = random_complex(&s, Ring::Integers, &mut r, small());
        let tri = truncate(&x, &t).unwrap();
        prop_assert!(in_d_geq0(&tri.below, &t));
        prop_assert!(in_d_leq_minus1(&tri.above, &t));
        prop_assert_eq!(is_stalkwise_quasi_iso(&tri.map_in), in_d_geq0(&x, &t));
        prop_assert_eq!(is_stalkwise_quasi_iso(&tri.map_out), in_d_leq_minus1(&x, &t));
        prop_assert_eq!(&truncate(&tri.below, &t).unwrap().below, &tri.below);
        prop_assert!(truncate(&tri.above, &t).unwrap().below.is_zero());
        let c = cone(&tri.map_in);
        let to_above = ChainMap::from_fn_checked(&c, &tri.above, |n, u| {
            let a = tri.below.module(n - 1, u).ngens();
            let out = tri.map_out.component(n, u);
            let mut m = Mat::zeros(out.rows(), a + out.cols());
            m.paste(0, a, &out);
            m
        })
        .unwrap();
        prop_assert!(is_stalkwise_quasi_iso(&to_above));
        for n in x.lo()..=x.hi() {
            let (hi, ho) = (homology_map(&tri.map_in, n), homology_map(&tri.map_out, n));
            for p in 0..s.npoints() {
                let u = s.min_open_id(p);
                prop_assert!(exact(&hi.component_hom(u), &ho.component_hom(u)));
            }
        }
    }

    #[test]
    fn perverse_membership(seed in 0u64..1_000_000) {
        let s = three();
        let mut r = rng(seed);
        let strata = match r.gen_range(0..3) {
            0 => vec![PointSet(0b001), PointSet(0b010), PointSet(0b100)],
            1 => vec![PointSet(0b011), PointSet(0b100)],
            _ => vec![PointSet(0b111)],
        };
        let perv = strata.iter().map(|_| r.gen_range(-1..=1)).collect();
        let st = Stratification::new(&s, strata, perv).unwrap();
        let t = TStructure::perverse(s.clone(), &st);
        let x = random_complex(&s, Ring::Integers, &mut r, small());
        prop_assert_eq!(in_d_geq0(&x, &t), perverse_geq0_direct(&x, &st));
        prop_assert_eq!(in_d_leq0(&x, &t), perverse_leq0_direct(&x, &st));
    }

    #[test]
    fn membership_monotone(seed in 0u64..1_000_000) {
        let s = if seed % 2 == 0 { sierp() } else { three() };
        let mut r = rng(seed);
        let vals: Vec<i64> = (0..s.npoints()).map(|_| r.gen_range(-1..=2)).collect();
        let lower: Vec<i64> = vals.iter().map(|v| v - r.gen_range(0..=1)).collect();
        let (d1, d0) = (DFunction::from_i64(&vals), DFunction::from_i64(&lower));
        prop_assume!(d_is_admissible(&s, &d1) && d_is_admissible(&s, &d0));
        let x = random_complex(&s, Ring::Integers, &mut r, small());
        let (t1, t0) = (TStructure::new(s.clone(), d1).unwrap(), TStructure::new(s.clone(), d0).unwrap());
        if in_d_geq0(&x, &t1) {
            prop_assert!(in_d_geq0(&x, &t0));
        }
        if in_d_leq0(&x, &t0) {
            prop_assert!(in_d_leq0(&x, &t1));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn orthogonality(seed in 0u64..1_000_000) {
        let s = if seed % 2 == 0 { sierp() } else { three() };
        let mut r = rng(seed);
        let t = TStructure::new(s.clone(), random_truncatable_d(&s, &mut r)).unwrap();
        let x = random_complex(&s, Ring::Integers, &mut r, small());
        let y = random_complex(&s, Ring::Integers, &mut r, small());
        let q = cofibrant_replacement(&truncate(&x, &t).unwrap().below).unwrap().middle;
        let above = truncate(&y, &t).unwrap().above;
        prop_assert!(homotopy_classes(&q, &above).is_zero());
    }
}

#[test]
fn infinite_values() {
    let s = sierp();
    let x = random_complex(&s, Ring::Integers, &mut rng(3), small());
    let all = TStructure::constant(s.clone(), ExtInt::NegInf);
    let none = TStructure::constant(s.clone(), ExtInt::PosInf);
    assert_eq!(truncate(&x, &all).unwrap().below, x);
    assert!(truncate(&x, &all).unwrap().above.is_zero());
    assert_eq!(truncate(&x, &none).unwrap().above, x);
}
