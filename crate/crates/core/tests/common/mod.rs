#![allow(dead_code)]

use std::sync::Arc;

use rand::Rng;
use tmodel::linalg::Ring;
use tmodel::presheaf::Presheaf;
use tmodel::random::{random_cyclic_sum, random_hom, rng, Rand};
use tmodel::site::{d_is_truncatable, DFunction, ExtInt, FinSpace, PointSet};

pub fn sierp() -> Arc<FinSpace> {
    Arc::new(FinSpace::sierpinski())
}

pub fn three() -> Arc<FinSpace> {
    Arc::new(FinSpace::three_point())
}

/// The Alexandrov space of a random partial order on at most `max` points:
/// opens are the up-closed sets.
pub fn random_space(seed: u64, max: usize) -> Arc<FinSpace> {
    let mut r = rng(seed);
    let n = r.gen_range(1..=max);
    let mut le = vec![vec![false; n]; n];
    for (i, row) in le.iter_mut().enumerate() {
        row[i] = true;
    }
    for i in 0..n {
        for j in i + 1..n {
            le[i][j] = r.gen_bool(0.4);
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if le[i][k] && le[k][j] {
                    le[i][j] = true;
                }
            }
        }
    }
    let opens: Vec<PointSet> = (1u64..1 << n)
        .map(PointSet)
        .filter(|s| s.points().all(|p| (0..n).all(|q| !le[p][q] || s.contains(q))))
        .collect();
    let names = (0..n).map(|i| format!("p{i}")).collect();
    Arc::new(FinSpace::new(names, &opens).expect("up-sets of a poset form a T0 topology"))
}

/// A presheaf that is usually neither free nor a sheaf: the cokernel of a
/// random map between cyclic sums.
pub fn random_presheaf(space: &Arc<FinSpace>, ring: Ring, r: &mut Rand) -> Presheaf {
    let (na, nb) = (r.gen_range(0..=2), r.gen_range(1..=3));
    let a = random_cyclic_sum(space, ring, r, na, true);
    let b = random_cyclic_sum(space, ring, r, nb, true);
    random_hom(&a, &b, r).cokernel().0
}

/// A random d-function with values in `{-1, 0, 1}` satisfying the truncation condition.
pub fn random_truncatable_d(space: &FinSpace, r: &mut Rand) -> DFunction {
    loop {
        let d = DFunction::new((0..space.npoints()).map(|_| ExtInt::Fin(r.gen_range(-1..=1))).collect());
        if d_is_truncatable(space, &d) {
            return d;
        }
    }
}
