use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use tmodel::linalg::{localize_at_prime, snf, tensor_residue, Elem, Mat, ModHom, Module, Ring};
use tmodel::random::{random_torsion_element, rng};

fn int_matrix(max: usize) -> impl Strategy<Value = Mat> {
    (1..=max, 1..=max).prop_flat_map(|(r, c)| {
        prop::collection::vec(prop::collection::vec(-6i64..=6, c), r).prop_map(move |rows| {
            let refs: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();
            Mat::from_i64(&Ring::Integers, &refs, c)
        })
    })
}

/// Fraction-free Gaussian elimination.
fn det(m: &Mat) -> Elem {
    let n = m.rows();
    let mut a: Vec<Vec<Elem>> = m.to_rows();
    let mut sign = Elem::one();
    let mut prev = Elem::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return Elem::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

fn random_module(ring: &Ring, seed: u64, n: usize) -> Module {
    let orders = (0..n as u64).map(|i| ring.from_i64([0, 0, 2, 3, 4, 6][((seed / 7 + i * 5) % 6) as usize])).collect();
    Module::from_orders(ring, orders)
}

fn random_modhom(ring: &Ring, seed: u64) -> ModHom {
    let mut r = rng(seed);
    let src = random_module(ring, seed, 1 + (seed % 3) as usize);
    let tgt = random_module(ring, seed / 3 + 11, 1 + (seed / 5 % 3) as usize);
    let cols: Vec<Vec<Elem>> = src.orders().iter().map(|a| random_torsion_element(&tgt, a, &mut r)).collect();
    ModHom::new(src, tgt.clone(), Mat::from_columns(tgt.ngens(), &cols)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn smith_form_certificate(m in int_matrix(4)) {
        let z = Ring::Integers;
        let f = snf(&m, &z);
        prop_assert_eq!(f.u.mul(&m, &z).mul(&f.v, &z), f.s.clone());
        prop_assert_eq!(f.u.mul(&f.u_inv, &z), Mat::identity(m.rows(), &z));
        prop_assert!(det(&f.u).abs().is_one());
        prop_assert!(det(&f.v).abs().is_one());
        for i in 0..f.s.rows() {
            for j in 0..f.s.cols() {
                if i != j {
                    prop_assert!(f.s.get(i, j).is_zero());
                }
            }
        }
        let d = f.diagonal();
        prop_assert!(d.iter().all(|x| !x.is_zero()));
        for w in d.windows(2) {
            prop_assert!((w[1].numer() % w[0].numer()).is_zero());
        }
        prop_assert!(f.rank <= m.rows().min(m.cols()));
    }

    #[test]
    fn kernel_cokernel_exact(seed in 0u64..100_000, field in any::<bool>()) {
        let ring = if field { Ring::Rationals } else { Ring::Integers };
        let h = random_modhom(&ring, seed);
        let (_, inc) = h.kernel();
        let (_, proj) = h.cokernel();
        prop_assert!(h.compose(&inc).is_zero());
        prop_assert!(proj.compose(&h).is_zero());
        prop_assert!(inc.is_injective());
        prop_assert!(proj.is_surjective());
        if field {
            let rank_img = h.source.ngens() - inc.source.ngens();
            prop_assert_eq!(proj.target.ngens() + rank_img, h.target.ngens());
        }
        // exactness at the source: every element killed by h comes from the kernel
        for j in 0..h.source.ngens() {
            let mut x = vec![Elem::zero(); h.source.ngens()];
            x[j] = Elem::one();
            let y = h.apply(&x);
            let pre = h.solve(&y).expect("image has a preimage");
            prop_assert_eq!(h.apply(&pre), y);
            let diff: Vec<Elem> = x.iter().zip(&pre).map(|(a, b)| ring.sub(a, b)).collect();
            prop_assert!(inc.solve(&h.source.reduce(&diff)).is_some());
        }
    }

    #[test]
    fn localization_additive(a in 0u64..500, b in 0u64..500, p in prop::sample::select(vec![0u64, 2, 3, 5])) {
        let z = Ring::Integers;
        let (m, n) = (random_module(&z, a, 2), random_module(&z, b, 3));
        let s = m.direct_sum(&n);
        let (lm, ln, ls) = (localize_at_prime(&m, p).unwrap(), localize_at_prime(&n, p).unwrap(), localize_at_prime(&s, p).unwrap());
        prop_assert_eq!(ls.free_rank, lm.free_rank + ln.free_rank);
        let mut parts: Vec<BigInt> = lm.invariant_factors.iter().chain(&ln.invariant_factors).map(|x| x.numer().clone()).collect();
        let mut whole: Vec<BigInt> = ls.invariant_factors.iter().map(|x| x.numer().clone()).collect();
        parts.sort();
        whole.sort();
        prop_assert_eq!(parts, whole);
        let dim = |m: &Module| tensor_residue(m, p).unwrap().ngens();
        prop_assert_eq!(dim(&s), dim(&m) + dim(&n));
    }
}
