use std::sync::Arc;

use super::*;
use crate::linalg::{Mat, Module, Ring};
use crate::site::{FinSpace, PointSet};

fn sierp() -> Arc<FinSpace> {
    Arc::new(FinSpace::sierpinski())
}

fn three() -> Arc<FinSpace> {
    Arc::new(FinSpace::three_point())
}

fn set(s: &FinSpace, names: &[&str]) -> PointSet {
    PointSet::from_points(&names.iter().map(|n| s.point_index(n).unwrap()).collect::<Vec<_>>())
}

#[test]
fn free_presheaf_values() {
    let s = sierp();
    let z = Ring::Integers;
    let whole = free_presheaf(s.clone(), z, s.all_points()).unwrap();
    assert!(whole.values().iter().all(|m| m.is_isomorphic(&Module::free(&z, 1))));
    let ro = free_presheaf(s.clone(), z, set(&s, &["o"])).unwrap();
    assert_eq!(ro.value_at(set(&s, &["o"])).unwrap().ngens(), 1);
    assert!(ro.value_at(s.all_points()).unwrap().is_zero());
    assert!(free_presheaf(s.clone(), z, set(&s, &["c"])).is_err());
}

#[test]
fn yoneda_count_over_f2() {
    let s = sierp();
    let f2 = Ring::PrimeField(2);
    let x = Presheaf::constant(s.clone(), &Module::free(&f2, 1));
    let o = s.open_id(set(&s, &["o"])).unwrap();
    let mut homs = Vec::new();
    for a in 0..2 {
        let h = yoneda_hom(&x, o, &[f2.from_i64(a)]).unwrap();
        h.check_naturality().unwrap();
        assert_eq!(yoneda_element(&h, o), vec![f2.from_i64(a)]);
        homs.push(h);
    }
    assert_ne!(homs[0], homs[1]);
}

#[test]
fn sheafification_on_three_points() {
    let s = three();
    let q = Ring::Rationals;
    let k = Presheaf::constant(s.clone(), &Module::free(&q, 1));
    let (l, unit) = sheafify(&k);
    let ab = set(&s, &["a", "b"]);
    assert_eq!(l.value_at(ab).unwrap().ngens(), 2);
    assert!(!unit.is_iso());
    assert!(is_sheaf(&l));
    assert!(!is_sheaf(&k));
    for p in 0..3 {
        assert!(stalk_hom(&unit, p).is_iso());
    }
}

#[test]
fn sheafification_restores_sections() {
    let s = three();
    let q = Ring::Rationals;
    let a = free_presheaf(s.clone(), q, set(&s, &["a"])).unwrap();
    let b = free_presheaf(s.clone(), q, set(&s, &["b"])).unwrap();
    let f = direct_sum(&[&a, &b]);
    assert!(f.value_at(set(&s, &["a", "b"])).unwrap().is_zero());
    assert!(!is_sheaf(&f));
    let (l, _) = sheafify(&f);
    assert_eq!(l.value_at(set(&s, &["a", "b"])).unwrap().ngens(), 2);
    let (ll, u2) = sheafify(&l);
    assert!(u2.is_iso());
    assert!(ll.same_shape(&l));
}

#[test]
fn sheaves_and_stalks() {
    let s = sierp();
    let z = Ring::Integers;
    let r = free_presheaf(s.clone(), z, s.all_points()).unwrap();
    assert!(is_sheaf(&r));
    assert!(is_sheaf(&Presheaf::zero(s.clone(), z)));
    let ro = free_presheaf(s.clone(), z, set(&s, &["o"])).unwrap();
    assert_eq!(support(&ro), set(&s, &["o"]));
    assert_eq!(support(&Presheaf::zero(s.clone(), z)), PointSet::EMPTY);
    assert!(stalk_hom(&PresheafHom::identity(&ro), 0).is_iso());
}

#[test]
fn tensor_examples() {
    let s = three();
    let z = Ring::Integers;
    for c1 in s.opens() {
        for c2 in s.opens() {
            let t =
                tensor(&free_presheaf(s.clone(), z, *c1).unwrap(), &free_presheaf(s.clone(), z, *c2).unwrap()).unwrap();
            let meet = c1.intersect(*c2);
            if meet.is_empty() {
                assert!(t.is_zero());
            } else {
                assert_eq!(t, free_presheaf(s.clone(), z, meet).unwrap());
            }
        }
    }
    let z2 = Presheaf::constant(s.clone(), &Module::cyclic(&z, &z.from_i64(2)));
    let z3 = Presheaf::constant(s.clone(), &Module::cyclic(&z, &z.from_i64(3)));
    assert!(tensor(&z2, &z3).unwrap().is_zero());
    let u = tensor_unitor(&z2);
    u.check_naturality().unwrap();
    assert!(u.is_iso());
}

#[test]
fn kernels_and_cokernels() {
    let s = sierp();
    let z = Ring::Integers;
    let c = set(&s, &["o"]);
    let rc = free_presheaf(s.clone(), z, c).unwrap();
    let (k, _) = PresheafHom::identity(&rc).kernel();
    assert!(k.is_zero());
    let (q, _) = PresheafHom::zero(&rc, &rc).cokernel();
    assert_eq!(q, rc);
    let sum = direct_sum(&[&rc, &rc]);
    let fold = PresheafHom::new(
        sum.clone(),
        rc.clone(),
        (0..s.nopens())
            .map(|u| Mat::from_i64(&z, &[&[1, 1]], 2).block(0, 0, rc.value(u).ngens(), sum.value(u).ngens()))
            .collect(),
    )
    .unwrap();
    let (k, incl) = fold.kernel();
    incl.check_naturality().unwrap();
    assert_eq!(stalk(&k, 0).free_rank(), 1);
    assert!(stalk(&k, 1).is_zero());
}

#[test]
fn free_decomposition_detects_free() {
    let s = three();
    let z = Ring::Integers;
    let a = free_presheaf(s.clone(), z, set(&s, &["a"])).unwrap();
    let x = free_presheaf(s.clone(), z, s.all_points()).unwrap();
    let f = direct_sum(&[&a, &x, &x]);
    let d = free_decomposition(&f).unwrap();
    assert_eq!(d.opens.len(), 3);
    let k = Presheaf::constant(s.clone(), &Module::cyclic(&z, &z.from_i64(2)));
    assert!(free_decomposition(&k).is_none());
    let (l, _) = sheafify(&x);
    assert!(free_decomposition(&l).is_none());
}

#[test]
fn presheaf_new_checks_functoriality() {
    let s = sierp();
    let z = Ring::Integers;
    let full = s.open_id(s.all_points()).unwrap();
    let o = s.open_id(set(&s, &["o"])).unwrap();
    let v = vec![Module::free(&z, 1); 2];
    let p = Presheaf::new(s.clone(), z, v.clone(), &[((full, o), Mat::from_i64(&z, &[&[2]], 1))]).unwrap();
    assert_eq!(p.res(full, o), &Mat::from_i64(&z, &[&[2]], 1));
    let bad = Presheaf::new(
        s.clone(),
        z,
        vec![Module::cyclic(&z, &z.from_i64(2)), Module::free(&z, 1)],
        &[((full, o), Mat::from_i64(&z, &[&[1]], 1))],
    );
    assert!(bad.is_ok());
    let bad = Presheaf::new(
        s.clone(),
        z,
        vec![Module::free(&z, 1), Module::cyclic(&z, &z.from_i64(2))],
        &[((full, o), Mat::from_i64(&z, &[&[1]], 1))],
    );
    assert!(bad.is_err());
}
