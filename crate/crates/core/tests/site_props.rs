mod common;

use proptest::prelude::*;
use rand::Rng;
use tmodel::random::rng;
use tmodel::site::*;

use common::random_space;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn minimal_opens(seed in 0u64..1_000_000) {
        let s = random_space(seed, 5);
        for p in 0..s.npoints() {
            let m = s.min_open(p);
            prop_assert!(m.contains(p) && s.is_open(m));
            for &u in s.opens() {
                if u.contains(p) {
                    prop_assert!(m.is_subset(u));
                }
            }
            for q in p + 1..s.npoints() {
                prop_assert_ne!(m, s.min_open(q));
            }
        }
    }

    #[test]
    fn perversity_strata_recovered(seed in 0u64..1_000_000) {
        let s = random_space(seed, 5);
        let mut r = rng(seed ^ 0x5eed);
        let labels: Vec<usize> = (0..s.npoints()).map(|_| r.gen_range(0..3)).collect();
        let strata: Vec<PointSet> = (0..3)
            .map(|l| PointSet::from_points(&(0..s.npoints()).filter(|&p| labels[p] == l).collect::<Vec<_>>()))
            .filter(|x| !x.is_empty())
            .collect();
        prop_assume!(strata.iter().all(|x| s.is_locally_closed(*x)));
        let perv: Vec<i64> = strata.iter().map(|_| r.gen_range(-2..=2)).collect();
        let st = Stratification::new(&s, strata.clone(), perv.clone()).unwrap();
        let d = d_from_perversity(&s, &st);
        for &v in &perv {
            let layer = d.upper_set(ExtInt::Fin(v)).minus(d.upper_set(ExtInt::Fin(v + 1)));
            let expected = strata
                .iter()
                .zip(&perv)
                .filter(|(_, &q)| q == v)
                .fold(PointSet::EMPTY, |acc, (x, _)| acc.union(*x));
            prop_assert_eq!(layer, expected);
        }
    }

    #[test]
    fn level_antitone(seed in 0u64..1_000_000) {
        let s = random_space(seed, 5);
        let mut r = rng(seed);
        let d = DFunction::new((0..s.npoints()).map(|_| ExtInt::Fin(r.gen_range(-2..=2))).collect());
        prop_assume!(d_is_admissible(&s, &d));
        for &c in s.opens() {
            for &c2 in s.opens() {
                if c.is_subset(c2) {
                    prop_assert!(n_of_open(&d, c).unwrap() >= n_of_open(&d, c2).unwrap());
                }
            }
        }
    }
}
