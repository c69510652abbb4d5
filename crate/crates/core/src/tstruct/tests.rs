use std::sync::Arc;

use super::*;
use crate::chain::{classify, sphere, ChainMap, PComplex};
use crate::linalg::{Module, Ring};
use crate::presheaf::{Cell, Presheaf};
use crate::random::{random_complex, random_map, rng, MapKind, Params};
use crate::site::{DFunction, ExtInt, FinSpace, PointSet, Stratification};

fn sierp() -> Arc<FinSpace> {
    Arc::new(FinSpace::sierpinski())
}

fn three() -> Arc<FinSpace> {
    Arc::new(FinSpace::three_point())
}

/// Classical `τ_{≥0}`: keeps degrees above 0 and the cycles in degree 0.
fn classical_tau(x: &PComplex) -> Vec<Vec<Module>> {
    (x.lo()..=x.hi())
        .map(|k| {
            (0..x.space().nopens())
                .map(|u| {
                    if k > 0 {
                        x.module(k, u).clone()
                    } else if k == 0 {
                        x.d_mod(0, u).kernel().0
                    } else {
                        Module::zero(x.ring())
                    }
                })
                .collect()
        })
        .collect()
}

#[test]
fn constant_truncations() {
    let s = three();
    let z = Ring::Integers;
    let p = Params { lo: -1, ..Params::default() };
    for seed in 0..10 {
        let x = random_complex(&s, z, &mut rng(seed), p);
        let lo = TStructure::constant(s.clone(), ExtInt::NegInf);
        let tri = truncate(&x, &lo).unwrap();
        assert_eq!(tri.below, x);
        assert!(tri.above.is_zero());
        let hi = TStructure::constant(s.clone(), ExtInt::PosInf);
        let tri = truncate(&x, &hi).unwrap();
        assert!(tri.below.is_zero());
        assert_eq!(tri.above, x);
        let zero = TStructure::constant(s.clone(), ExtInt::Fin(0));
        let tri = truncate(&x, &zero).unwrap();
        let oracle = classical_tau(&x);
        for k in x.lo()..=x.hi() {
            for u in 0..s.nopens() {
                assert!(tri.below.module(k, u).is_isomorphic(&oracle[(k - x.lo()) as usize][u]));
            }
        }
        assert!(in_d_geq0(&tri.below, &zero));
        assert!(in_d_leq_minus1(&tri.above, &zero));
    }
}

#[test]
fn membership_examples() {
    let s = sierp();
    let z = Ring::Integers;
    let zero = PComplex::zero(s.clone(), z);
    let t0 = TStructure::constant(s.clone(), ExtInt::Fin(0));
    assert!(in_d_geq0(&zero, &t0) && in_d_leq0(&zero, &t0));
    for k in -2..=2 {
        let x = sphere(&s, z, s.all_points(), k).unwrap();
        assert_eq!(in_d_geq0(&x, &t0), k >= 0);
        assert_eq!(in_d_leq0(&x, &t0), k <= 0);
    }
    let o = s.point_index("o").unwrap();
    let c = s.point_index("c").unwrap();
    let mut vals = vec![ExtInt::Fin(0); 2];
    vals[o] = ExtInt::Fin(1);
    vals[c] = ExtInt::Fin(0);
    let t = TStructure::new(s.clone(), DFunction::new(vals)).unwrap();
    assert!(t.admissible && !t.truncatable);
    let x = sphere(&s, z, PointSet::singleton(o), 0).unwrap();
    assert!(!in_d_geq0(&x, &t));
    assert!(truncate(&x, &t).is_err());
}

#[test]
fn sierpinski_truncation() {
    let s = sierp();
    let z = Ring::Integers;
    let o = s.point_index("o").unwrap();
    let mut vals = vec![ExtInt::Fin(0); 2];
    vals[o] = ExtInt::Fin(0);
    vals[s.point_index("c").unwrap()] = ExtInt::Fin(1);
    let t = TStructure::new(s.clone(), DFunction::new(vals)).unwrap();
    assert!(t.truncatable);
    let p = Params { lo: -1, max_len: 4, ..Params::default() };
    for seed in 0..20 {
        let x = random_complex(&s, z, &mut rng(seed), p);
        let tri = truncate(&x, &t).unwrap();
        assert!(in_d_geq0(&tri.below, &t));
        assert!(in_d_leq_minus1(&tri.above, &t));
        assert_eq!(classify(&tri.map_in).stalkwise_iso, in_d_geq0(&x, &t));
        assert_eq!(classify(&tri.map_out).stalkwise_iso, in_d_leq_minus1(&x, &t));
        let again = truncate(&tri.below, &t).unwrap();
        assert_eq!(again.below, tri.below);
        assert!(truncate(&tri.above, &t).unwrap().below.is_zero());
        let heart = heart_project(&x, &t).unwrap();
        assert!(in_d_geq0(&heart, &t) && in_d_leq0(&heart, &t));
    }
}

#[test]
fn equivalences() {
    let s = three();
    let z = Ring::Integers;
    let t0 = TStructure::constant(s.clone(), ExtInt::Fin(0));
    let x = sphere(&s, z, s.all_points(), 1).unwrap();
    for n in -1..=2 {
        assert!(is_n_equivalence(&ChainMap::identity(&x), &t0, n));
    }
    let zero = PComplex::zero(s.clone(), z);
    for k in -1..=2 {
        let r = sphere(&s, z, s.all_points(), k).unwrap();
        let f = ChainMap::zero(&zero, &r);
        for n in -1..=2 {
            assert_eq!(is_n_equivalence(&f, &t0, n), k > n, "k={k} n={n}");
            assert_eq!(hofib_in_d_geq(&f, &t0, n), k > n);
        }
    }
    let p = Params::default();
    for seed in 0..10 {
        let f = random_map(&s, z, &mut rng(seed), p, MapKind::Generic);
        for n in -1..=1 {
            assert_eq!(is_n_equivalence(&f, &t0, n), hofib_in_d_geq(&f, &t0, n));
        }
    }
}

#[test]
fn t_factorizations() {
    let s = sierp();
    let z = Ring::Integers;
    let o = s.point_index("o").unwrap();
    let mut vals = vec![ExtInt::Fin(1); 2];
    vals[o] = ExtInt::Fin(0);
    let t = TStructure::new(s.clone(), DFunction::new(vals)).unwrap();
    let p = Params::default();
    for seed in 0..10 {
        let f = random_map(&s, z, &mut rng(seed), p, MapKind::Generic);
        for n in -1..=1 {
            let fac = factor_t(&f, &t, n).unwrap();
            assert_eq!(fac.h.compose(&fac.g), f);
        }
    }
    let x = random_complex(&s, z, &mut rng(99), p);
    let fac = factor_t(&ChainMap::identity(&x), &t, 0).unwrap();
    assert!(classify(&fac.g).stalkwise_iso && classify(&fac.h).stalkwise_iso);
}

#[test]
fn refined_membership() {
    let s = sierp();
    let z = Ring::Integers;
    let whole = s.open_id(s.all_points()).unwrap();
    let z3 = Presheaf::cyclic_sum(s.clone(), z, vec![Cell { open: whole, order: z.from_i64(3) }]);
    let x = PComplex::concentrated(&z3, 0);
    let at = |prime: u64| {
        RefinedDFunction::new(&s, vec![prime], vec![vec![ExtInt::Fin(1)]; 2], vec![ExtInt::Fin(0); 2]).unwrap()
    };
    for mode in [RefinedMode::Localize, RefinedMode::Residue] {
        assert!(in_d_geq0_refined(&x, &at(2), mode).unwrap());
        assert!(!in_d_geq0_refined(&x, &at(3), mode).unwrap());
        assert!(in_d_geq0_refined(&x, &at(0), mode).unwrap());
    }
    let r = sphere(&s, z, s.all_points(), 0).unwrap();
    assert!(!in_d_geq0_refined(&r, &at(0), RefinedMode::Residue).unwrap());
    assert_eq!(relevant_primes(&x), vec![3]);
    let q = PComplex::concentrated(&Presheaf::constant(s.clone(), &Module::free(&Ring::Rationals, 1)), 0);
    assert!(in_d_geq0_refined(&q, &at(2), RefinedMode::Localize).is_err());
    let p = Params { lo: -1, ..Params::default() };
    for seed in 0..10 {
        let x = random_complex(&s, z, &mut rng(seed), p);
        for d in [[0, 0], [0, 1], [1, 0], [-1, 2]] {
            let d = DFunction::from_i64(&d);
            let t = TStructure::new(s.clone(), d.clone()).unwrap();
            let rd = RefinedDFunction::constant_on_fibers(&d);
            for mode in [RefinedMode::Localize, RefinedMode::Residue] {
                assert_eq!(in_d_geq0_refined(&x, &rd, mode).unwrap(), in_d_geq0(&x, &t));
            }
        }
    }
}

#[test]
fn perverse_agreement() {
    let s = three();
    let z = Ring::Integers;
    let strata = vec![PointSet::from_points(&[0]), PointSet::from_points(&[1]), PointSet::from_points(&[2])];
    let p = Params { lo: -1, ..Params::default() };
    for seed in 0..10 {
        let x = random_complex(&s, z, &mut rng(seed), p);
        for perv in [[0, 0, 0], [-1, 0, 1], [1, -1, 0]] {
            let st = Stratification::new(&s, strata.clone(), perv.to_vec()).unwrap();
            let t = TStructure::perverse(s.clone(), &st);
            assert_eq!(in_d_geq0(&x, &t), perverse_geq0_direct(&x, &st));
            assert_eq!(in_d_leq0(&x, &t), perverse_leq0_direct(&x, &st));
        }
    }
}

#[test]
fn iprime_classes() {
    let s = three();
    let z = Ring::Integers;
    let p = Params::default();
    let f = random_map(&s, z, &mut rng(3), p, MapKind::Generic);
    assert!(w_iprime_classify(&f, &IPrime::from_pairs(&s, &[]).unwrap()));
    assert!(IPrime::from_pairs(&s, &[(0, 0), (0, 2)]).is_err());
    let x = random_complex(&s, z, &mut rng(4), p);
    let all: Vec<(usize, i64)> = (0..s.nopens()).flat_map(|c| (-1..=4).map(move |m| (c, m))).collect();
    let ip = IPrime::from_pairs(&s, &all).unwrap();
    assert!(w_iprime_classify(&ChainMap::identity(&x), &ip));
    let zero = PComplex::zero(s.clone(), z);
    let r = sphere(&s, z, s.all_points(), 1).unwrap();
    let g = ChainMap::zero(&zero, &r);
    assert!(w_iprime_classify(&g, &IPrime::from_pairs(&s, &[(0, 0)]).unwrap()));
    assert!(!w_iprime_classify(&g, &IPrime::from_pairs(&s, &[(0, 1)]).unwrap()));
}
