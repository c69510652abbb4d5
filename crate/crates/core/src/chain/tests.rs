use std::sync::Arc;

use super::*;
use crate::linalg::{Mat, Module, Ring};
use crate::presheaf::{direct_sum, free_presheaf, Presheaf};
use crate::site::{FinSpace, PointSet};

fn three() -> Arc<FinSpace> {
    Arc::new(FinSpace::three_point())
}

fn set(s: &FinSpace, names: &[&str]) -> PointSet {
    PointSet::from_points(&names.iter().map(|n| s.point_index(n).unwrap()).collect::<Vec<_>>())
}

fn r(s: &Arc<FinSpace>, ring: Ring) -> Presheaf {
    free_presheaf(s.clone(), ring, s.all_points()).unwrap()
}

#[test]
fn unit_interval_homology() {
    let s = three();
    let z = Ring::Integers;
    let u = unit_interval(&s, z);
    u.validate().unwrap();
    assert_eq!(homology(&u, 0), r(&s, z));
    assert!(homology(&u, 1).is_zero());
    assert!(homology(&u, -1).is_zero());
}

#[test]
fn disks_and_spheres() {
    let s = three();
    let z = Ring::Integers;
    let c = set(&s, &["a", "b"]);
    assert!(is_acyclic(&disk(&s, z, c, 2).unwrap()));
    let sp = sphere(&s, z, c, 3).unwrap();
    assert_eq!(homology(&sp, 3), free_presheaf(s.clone(), z, c).unwrap());
    assert!(homology(&sp, 2).is_zero());
}

#[test]
fn classify_examples() {
    let s = three();
    let q = Ring::Rationals;
    let u = unit_interval(&s, q);
    let rep = classify(&ChainMap::identity(&u));
    assert!(rep.presheaf_iso && rep.sheaf_iso && rep.stalkwise_iso);
    assert!(rep.witnesses.is_empty());
    let d = disk(&s, q, s.all_points(), 0).unwrap();
    let to_zero = ChainMap::zero(&d, &PComplex::zero(s.clone(), q));
    assert!(classify(&to_zero).presheaf_iso);
    // X = H[0] with H(a,b) = 0 but H(a), H(b) nonzero
    let h = direct_sum(&[
        &free_presheaf(s.clone(), q, set(&s, &["a"])).unwrap(),
        &free_presheaf(s.clone(), q, set(&s, &["b"])).unwrap(),
    ]);
    let x = PComplex::concentrated(&h, 0);
    let (_, eta) = sheafify_complex(&x);
    eta.validate().unwrap();
    let rep = classify(&eta);
    assert!(!rep.presheaf_iso);
    assert!(rep.sheaf_iso && rep.stalkwise_iso);
    assert!(rep.witnesses.iter().any(|w| w.level == IsoLevel::Presheaf && w.degree == 0));
}

#[test]
fn cones() {
    let s = three();
    let z = Ring::Integers;
    let u = unit_interval(&s, z);
    let c = cone(&ChainMap::identity(&u));
    c.validate().unwrap();
    assert!(is_acyclic(&c));
    let zero = PComplex::zero(s.clone(), z);
    assert_eq!(cone(&ChainMap::zero(&zero, &u)), u);
    let h = hofib(&ChainMap::identity(&u));
    assert!(is_acyclic(&h));
    hofib_projection(&ChainMap::identity(&u)).validate().unwrap();
    cone_inclusion(&ChainMap::identity(&u)).validate().unwrap();
    cone_projection(&ChainMap::identity(&u)).validate().unwrap();
    hofib_inclusion(&ChainMap::identity(&u)).validate().unwrap();
}

#[test]
fn tensor_total_examples() {
    let s = three();
    let z = Ring::Integers;
    let u = unit_interval(&s, z);
    let e = tensor_unit_map(&u);
    e.validate().unwrap();
    assert!(e.is_iso());
    let (a, b) = (set(&s, &["a", "b"]), set(&s, &["b"]));
    let t = tensor_total(&sphere(&s, z, a, 1).unwrap(), &sphere(&s, z, b, 2).unwrap()).unwrap();
    assert_eq!(t, sphere(&s, z, b, 3).unwrap());
    let uu = tensor_total(&u, &u).unwrap();
    uu.validate().unwrap();
    assert_eq!(homology(&uu, 0), r(&s, z));
    assert!(homology(&uu, 1).is_zero() && homology(&uu, 2).is_zero());
}

#[test]
fn homotopy_classes_examples() {
    let s = three();
    let z = Ring::Integers;
    let c = set(&s, &["a", "b"]);
    let y = direct_sum_complex(&[&unit_interval(&s, z), &sphere(&s, z, s.all_points(), 1).unwrap()]);
    let rc = sphere(&s, z, c, 0).unwrap();
    let hc = homotopy_classes(&rc, &y);
    let cid = s.open_id(c).unwrap();
    assert!(hc.is_isomorphic(homology(&y, 0).value(cid)));
    let d = disk(&s, z, c, 0).unwrap();
    let hd = HomotopyClasses::new(&d, &d);
    assert!(hd.is_null_homotopic(&ChainMap::identity(&d)));
    assert!(hd.null_homotopy(&ChainMap::identity(&d)).is_some());
    let hu = HomotopyClasses::new(&y, &y);
    assert!(!hu.is_null_homotopic(&ChainMap::identity(&y)));
    let zero = PComplex::zero(s.clone(), z);
    let mc = MappingComplex::full(&zero, &y);
    assert!(mc.spaces.iter().all(|h| h.module.is_zero()));
}

#[test]
fn yoneda_and_general_paths_agree() {
    let s = three();
    let z = Ring::Integers;
    let x =
        direct_sum_complex(&[&disk(&s, z, set(&s, &["a"]), 0).unwrap(), &sphere(&s, z, s.all_points(), 0).unwrap()]);
    let y = direct_sum_complex(&[&unit_interval(&s, z), &sphere(&s, z, set(&s, &["b"]), 1).unwrap()]);
    let fast = MappingComplex::new(&x, &y, -1, 1).as_mod_complex();
    let slow = MappingComplex::new_general(&x, &y, -1, 1).as_mod_complex();
    for k in -1..=1 {
        assert!(fast.homology(k).unwrap().is_isomorphic(&slow.homology(k).unwrap()));
    }
    let (_, maps) = chain_maps(&x, &y);
    for f in maps {
        f.validate().unwrap();
    }
}

#[test]
fn simplicial_tensors() {
    let s = three();
    let z = Ring::Integers;
    let x =
        direct_sum_complex(&[&sphere(&s, z, set(&s, &["a"]), 0).unwrap(), &sphere(&s, z, s.all_points(), 1).unwrap()]);
    let p = simplicial_tensor(&x, &SimplicialComplex::point()).unwrap();
    assert_eq!(p, x);
    let circle = simplicial_tensor(&x, &SimplicialComplex::simplex_boundary(2)).unwrap();
    circle.validate().unwrap();
    for n in -1..=3 {
        let lhs = homology(&circle, n);
        let (h0, h1) = (homology(&x, n), homology(&x, n - 1));
        for u in 0..s.nopens() {
            assert!(lhs.value(u).is_isomorphic(&h0.value(u).direct_sum(h1.value(u))));
        }
    }
    let tri = simplicial_tensor(&x, &SimplicialComplex::simplex(2)).unwrap();
    for n in -1..=3 {
        assert!(homology(&tri, n).same_shape(&homology(&x, n)));
    }
}

#[test]
fn complex_validation() {
    let s = three();
    let z = Ring::Integers;
    let rr = r(&s, z);
    let two = vec![Mat::from_i64(&z, &[&[2]], 1); s.nopens()];
    let x = PComplex::new(s.clone(), z, 0, vec![rr.clone(), rr.clone(), rr.clone()], vec![two.clone(), two.clone()]);
    assert!(x.is_err());
    let m = Presheaf::constant(s.clone(), &Module::cyclic(&z, &z.from_i64(4)));
    let x = PComplex::new(s.clone(), z, 0, vec![m.clone(), m.clone(), m], vec![two.clone(), two]).unwrap();
    let z2 = Module::cyclic(&z, &z.from_i64(2));
    assert!(homology(&x, 1).is_zero());
    assert!(homology(&x, 0).values().iter().all(|v| v.is_isomorphic(&z2)));
    assert!(homology(&x, 2).values().iter().all(|v| v.is_isomorphic(&z2)));
}
