mod common;

use proptest::prelude::*;
use rand::Rng;
use tmodel::chain::{cokernel_complex, tensor_total, ChainMap, PComplex};
use tmodel::linalg::{Mat, Ring};
use tmodel::model::*;
use tmodel::presheaf::free_decomposition;
use tmodel::random::{random_map, rng, MapKind, Params};

use common::{sierp, three};

fn small() -> Params {
    Params { max_rank: 2, max_len: 2, ..Params::default() }
}

fn kind(k: u8) -> MapKind {
    [MapKind::Generic, MapKind::Surjective, MapKind::AcyclicFibration][k as usize % 3]
}

/// `x ⊗ y ↦ (-1)^{|x||y|} y ⊗ x`, built from the block layout of the total complex.
fn koszul_swap(x: &PComplex, y: &PComplex) -> ChainMap {
    let xy = tensor_total(x, y).unwrap();
    let yx = tensor_total(y, x).unwrap();
    let ring = *x.ring();
    let layout = |a: &PComplex, b: &PComplex, n: i64, u: usize| {
        let mut out = Vec::new();
        let mut off = 0;
        for i in a.lo()..=a.hi() {
            let j = n - i;
            if j >= b.lo() && j <= b.hi() {
                let pairs = a.module(i, u).tensor(b.module(j, u)).1;
                let len = pairs.len();
                out.push((i, j, off, pairs));
                off += len;
            }
        }
        out
    };
    ChainMap::from_fn_checked(&xy, &yx, |n, u| {
        let src = layout(x, y, n, u);
        let dst = layout(y, x, n, u);
        let mut m = Mat::zeros(yx.module(n, u).ngens(), xy.module(n, u).ngens());
        for (i, j, off, pairs) in &src {
            let (_, _, doff, dpairs) = dst.iter().find(|b| b.0 == *j).unwrap();
            let s = if (i * j).rem_euclid(2) == 0 { ring.one() } else { ring.from_i64(-1) };
            for (c, &(a, b)) in pairs.iter().enumerate() {
                let r = dpairs.iter().position(|&p| p == (b, a)).unwrap();
                m.set(doff + r, off + c, s.clone());
            }
        }
        m
    })
    .expect("the Koszul swap is a chain map")
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn rlp_matches_predicates(seed in 0u64..1_000_000, k in 0u8..3) {
        let s = if seed % 2 == 0 { sierp() } else { three() };
        let f = random_map(&s, Ring::Integers, &mut rng(seed), Params::default(), kind(k));
        prop_assert_eq!(has_rlp(&f, GenKind::J), is_fibration(&f));
        prop_assert_eq!(has_rlp(&f, GenKind::I), is_acyclic_fibration(&f));
    }

    #[test]
    fn factorizations_audit(seed in 0u64..1_000_000, k in 0u8..3) {
        let s = if seed % 2 == 0 { sierp() } else { three() };
        let f = random_map(&s, Ring::Integers, &mut rng(seed), Params::default(), kind(k));
        let fac = factor_cof_acyclicfib(&f).unwrap();
        prop_assert_eq!(fac.second.compose(&fac.first), f.clone());
        prop_assert!(fac.first.is_injective());
        let coker = cokernel_complex(&fac.first).0;
        for t in coker.terms() {
            prop_assert!(free_decomposition(t).is_some());
        }
        prop_assert!(is_acyclic_fibration(&fac.second));
    }

    #[test]
    fn pushout_product_symmetric(seed in 0u64..1_000_000) {
        let s = if seed % 2 == 0 { sierp() } else { three() };
        let mut r = rng(seed);
        let (k1, k2) = (r.gen_range(0..3), r.gen_range(0..3));
        let f1 = random_map(&s, Ring::Integers, &mut r, small(), kind(k1));
        let f2 = random_map(&s, Ring::Integers, &mut r, small(), kind(k2));
        let m12 = pushout_product(&f1, &f2).unwrap().map;
        let m21 = pushout_product(&f2, &f1).unwrap().map;
        let sigma = koszul_swap(&f1.target, &f2.target);
        prop_assert!(sigma.is_iso());
        let back = koszul_swap(&f2.target, &f1.target);
        prop_assert_eq!(back.compose(&sigma), ChainMap::identity(&sigma.source));
        let (lo, hi) = sigma.degree_range();
        for n in lo..=hi {
            for u in 0..s.nopens() {
                let sm = sigma.component(n, u).mul(&m12.component(n, u), &Ring::Integers);
                let bm = back.component(n, u).mul(&m21.component(n, u), &Ring::Integers);
                for c in sm.columns() {
                    prop_assert!(m21.component_mod(n, u).solve(&c).is_some());
                }
                for c in bm.columns() {
                    prop_assert!(m12.component_mod(n, u).solve(&c).is_some());
                }
            }
        }
    }
}
