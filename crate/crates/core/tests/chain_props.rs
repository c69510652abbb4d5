mod common;

use proptest::prelude::*;
use rand::Rng;
use tmodel::chain::*;
use tmodel::linalg::{ModHom, Ring};
use tmodel::model::cofibrant_replacement;
use tmodel::random::{random_chain_map, random_complex, random_map, rng, MapKind, Params};

use common::{random_space, sierp, three};

fn exact(a: &ModHom, b: &ModHom) -> bool {
    b.compose(a).is_zero() && b.kernel().1.matrix.columns().iter().all(|v| a.solve(v).is_some())
}

fn small() -> Params {
    Params { max_rank: 2, max_len: 3, ..Params::default() }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn constructions_square_to_zero(seed in 0u64..1_000_000) {
        let s = random_space(seed, 4);
        let mut r = rng(seed);
        let f = random_map(&s, Ring::Integers, &mut r, small(), MapKind::Generic);
        f.validate().unwrap();
        cone(&f).validate().unwrap();
        hofib(&f).validate().unwrap();
        tensor_total(&f.source, &f.target).unwrap().validate().unwrap();
        cone_inclusion(&f).validate().unwrap();
        cone_projection(&f).validate().unwrap();
    }

    #[test]
    fn cone_long_exact_sequence(seed in 0u64..1_000_000, three_pt in any::<bool>()) {
        let s = if three_pt { three() } else { sierp() };
        let f = random_map(&s, Ring::Integers, &mut rng(seed), Params::default(), MapKind::Generic);
        let (i, p, f1) = (cone_inclusion(&f), cone_projection(&f), shift_map(&f, 1));
        let c = cone(&f);
        for n in c.lo() - 1..=c.hi() + 1 {
            let (hf, hi, hp, hf1) = (homology_map(&f, n), homology_map(&i, n), homology_map(&p, n), homology_map(&f1, n));
            for u in 0..s.nopens() {
                prop_assert!(exact(&hf.component_hom(u), &hi.component_hom(u)), "at Y, degree {n}");
                prop_assert!(exact(&hi.component_hom(u), &hp.component_hom(u)), "at cone, degree {n}");
                prop_assert!(exact(&hp.component_hom(u), &hf1.component_hom(u)), "at X[1], degree {n}");
            }
        }
    }

    #[test]
    fn two_out_of_three(seed in 0u64..1_000_000) {
        let s = if seed % 2 == 0 { sierp() } else { three() };
        let mut r = rng(seed);
        let z = Ring::Integers;
        let f = match r.gen_range(0..3) {
            0 => sheafify_complex(&random_complex(&s, z, &mut r, small())).1,
            1 => random_map(&s, z, &mut r, small(), MapKind::AcyclicFibration),
            _ => random_map(&s, z, &mut r, small(), MapKind::Generic),
        };
        let g = match r.gen_range(0..3) {
            0 => sheafify_complex(&f.target).1,
            1 => ChainMap::identity(&f.target).scale(&z.from_i64(-1)),
            _ => {
                let w = random_complex(&s, z, &mut r, small());
                random_chain_map(&f.target, &w, &mut r)
            }
        };
        let isos = [&f, &g, &g.compose(&f)].iter().filter(|m| is_stalkwise_quasi_iso(m)).count();
        prop_assert_ne!(isos, 2);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn cofibrant_objects_are_flat(seed in 0u64..1_000_000) {
        let s = if seed % 2 == 0 { sierp() } else { three() };
        let mut r = rng(seed);
        let z = Ring::Integers;
        let k = cofibrant_replacement(&random_complex(&s, z, &mut r, small())).unwrap().middle;
        let f = if r.gen_bool(0.5) {
            sheafify_complex(&random_complex(&s, z, &mut r, small())).1
        } else {
            random_map(&s, z, &mut r, small(), MapKind::AcyclicFibration)
        };
        prop_assert!(is_stalkwise_quasi_iso(&f));
        let kf = tensor_maps(&ChainMap::identity(&k), &f).unwrap();
        prop_assert!(classify(&kf).stalkwise_iso);
    }

    #[test]
    fn homotopy_classes_stable_under_replacement(seed in 0u64..1_000_000) {
        let s = sierp();
        let mut r = rng(seed);
        let z = Ring::Integers;
        let x = cofibrant_replacement(&random_complex(&s, z, &mut r, small())).unwrap().middle;
        let k = cofibrant_replacement(&x).unwrap().middle;
        let y = random_complex(&s, z, &mut r, small());
        prop_assert!(homotopy_classes(&x, &y).is_isomorphic(&homotopy_classes(&k, &y)));
    }
}
