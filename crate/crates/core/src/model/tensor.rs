use crate::chain::{
    cokernel_with_lifts, direct_sum_maps, tensor_maps, tensor_total, unit_complex, unit_interval, ChainMap, PComplex,
};
use crate::error::Result;
use crate::linalg::Mat;

/// The pushout `P = B₁⊗A₂ ⊔_{A₁⊗A₂} A₁⊗B₂` and the induced map `P → B₁⊗B₂`.
#[derive(Clone, Debug)]
pub struct PushoutProduct {
    pub pushout: PComplex,
    pub map: ChainMap,
}

/// Pushout-product `f₁ □ f₂` of `f₁ : A₁ → B₁` and `f₂ : A₂ → B₂`.
pub fn pushout_product(f1: &ChainMap, f2: &ChainMap) -> Result<PushoutProduct> {
    let (a1, b1) = (&f1.source, &f1.target);
    let (a2, b2) = (&f2.source, &f2.target);
    a1.check_compatible(a2)?;
    let ring = *a1.ring();
    let left = tensor_maps(f1, &ChainMap::identity(a2))?;
    let right = tensor_maps(&ChainMap::identity(a1), f2)?;
    let (sum, incl, proj) = direct_sum_maps(&[&left.target, &right.target]);
    let h = incl[0].compose(&left).sub(&incl[1].compose(&right));
    let (pushout, _, lifts) = cokernel_with_lifts(&h);
    let to_b = tensor_maps(&ChainMap::identity(b1), f2)?
        .compose(&proj[0])
        .add(&tensor_maps(f1, &ChainMap::identity(b2))?.compose(&proj[1]));
    let target = tensor_total(b1, b2)?;
    let lo = sum.lo();
    let map = ChainMap::from_fn(&pushout, &target, |n, u| {
        if n < lo || n > sum.hi() {
            return Mat::zeros(target.module(n, u).ngens(), 0);
        }
        to_b.component(n, u).mul(&lifts[(n - lo) as usize][u], &ring)
    });
    Ok(PushoutProduct { pushout, map })
}

/// `X ⊕ X → X ⊗ U → X` with `U` the unit interval.
#[derive(Clone, Debug)]
pub struct Cylinder {
    pub cylinder: PComplex,
    pub inclusion: ChainMap,
    pub projection: ChainMap,
}

pub fn cylinder(x: &PComplex) -> Result<Cylinder> {
    let space = x.space_arc();
    let ring = *x.ring();
    let u = unit_interval(space, ring);
    let r = unit_complex(space, ring);
    let ends: Vec<ChainMap> = [[1, 0], [0, 1]]
        .iter()
        .map(|e| {
            ChainMap::from_fn(&r, &u, |n, v| {
                if n == 0 && r.module(0, v).ngens() == 1 {
                    Mat::from_i64(&ring, &[&[e[0]], &[e[1]]], 1)
                } else {
                    Mat::zeros(u.module(n, v).ngens(), r.module(n, v).ngens())
                }
            })
        })
        .collect();
    let collapse = ChainMap::from_fn(&u, &r, |n, v| {
        if n == 0 {
            Mat::from_i64(&ring, &[&[1, 1]], 2)
        } else {
            Mat::zeros(r.module(n, v).ngens(), u.module(n, v).ngens())
        }
    });
    let id = ChainMap::identity(x);
    let e0 = tensor_maps(&id, &ends[0])?;
    let e1 = tensor_maps(&id, &ends[1])?;
    let cyl = e0.target.clone();
    let (xx, _, _) = direct_sum_maps(&[x, x]);
    let inclusion = ChainMap::from_fn(&xx, &cyl, |n, v| e0.component(n, v).hstack(&e1.component(n, v)));
    let p = tensor_maps(&id, &collapse)?;
    let projection = ChainMap::from_fn(&cyl, x, |n, v| p.component(n, v));
    Ok(Cylinder { cylinder: cyl, inclusion, projection })
}
