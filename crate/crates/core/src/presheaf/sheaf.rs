use crate::linalg::{Elem, Mat, ModHom, Module, Subquotient};
use crate::site::PointSet;

use super::{Presheaf, PresheafHom};

/// Compatible families over the minimal opens of each open.
struct Families {
    presheaf: Presheaf,
    /// Per open: the family submodule of `⊕_{p∈U} F(U_p)`.
    kernels: Vec<Subquotient>,
    /// Per open: `(point, offset)` of each summand in the ambient coordinates.
    blocks: Vec<Vec<(usize, usize)>>,
}

fn families(f: &Presheaf) -> Families {
    let space = f.space();
    let ring = *f.ring();
    let n = space.nopens();
    let mut kernels = Vec::with_capacity(n);
    let mut blocks = Vec::with_capacity(n);
    for u in 0..n {
        let pts: Vec<usize> = space.open(u).points().collect();
        let mut offs = Vec::new();
        let mut amb = 0;
        for &p in &pts {
            offs.push((p, amb));
            amb += f.value(space.min_open_id(p)).ngens();
        }
        let ambient =
            Module::direct_sum_all(&ring, &pts.iter().map(|&p| f.value(space.min_open_id(p))).collect::<Vec<_>>());
        let mut rows: Vec<Mat> = Vec::new();
        let mut targets = Vec::new();
        for &(p, op) in &offs {
            for &(q, oq) in &offs {
                if p == q || !space.generizes(q, p) {
                    continue;
                }
                // q ∈ U_p, so U_q ⊆ U_p: require res(x_p) = x_q
                let (up, uq) = (space.min_open_id(p), space.min_open_id(q));
                let target = f.value(uq);
                let mut m = Mat::zeros(target.ngens(), amb);
                m.paste(0, op, f.res(up, uq));
                m.paste(0, oq, &Mat::identity(target.ngens(), &ring).neg(&ring));
                rows.push(m);
                targets.push(target);
            }
        }
        let mut c = Mat::zeros(0, amb);
        for m in &rows {
            c = c.vstack(m);
        }
        let h = ModHom::new_unchecked(ambient, Module::direct_sum_all(&ring, &targets), c);
        kernels.push(h.kernel_subquotient());
        blocks.push(offs);
    }
    let values: Vec<Module> = kernels.iter().map(|k| k.module.clone()).collect();
    let presheaf = Presheaf::from_fn(f.space_arc().clone(), ring, values, |u, v| {
        let ku = &kernels[u];
        let kv = &kernels[v];
        let mut m = Mat::zeros(kv.module.ngens(), ku.module.ngens());
        for j in 0..ku.module.ngens() {
            let x = ku.lifts.col(j);
            let y = project(&x, &blocks[u], &blocks[v], f);
            let c = kv.coords(&y).expect("restricted family is compatible");
            for (i, e) in c.into_iter().enumerate() {
                m.set(i, j, e);
            }
        }
        m
    });
    Families { presheaf, kernels, blocks }
}

/// Keeps the summands of the points in `to`.
fn project(x: &[Elem], from: &[(usize, usize)], to: &[(usize, usize)], f: &Presheaf) -> Vec<Elem> {
    let space = f.space();
    let mut out = Vec::new();
    for &(q, _) in to {
        let &(_, off) = from.iter().find(|(p, _)| *p == q).expect("V ⊆ U");
        let len = f.value(space.min_open_id(q)).ngens();
        out.extend_from_slice(&x[off..off + len]);
    }
    out
}

fn unit_of(f: &Presheaf, fam: &Families) -> PresheafHom {
    let space = f.space();
    let comps = (0..space.nopens())
        .map(|u| {
            let k = &fam.kernels[u];
            let mut m = Mat::zeros(k.module.ngens(), f.value(u).ngens());
            for j in 0..f.value(u).ngens() {
                let mut x = Vec::new();
                for &(p, _) in &fam.blocks[u] {
                    x.extend(f.res(u, space.min_open_id(p)).col(j));
                }
                let c = k.coords(&x).expect("restrictions form a compatible family");
                for (i, e) in c.into_iter().enumerate() {
                    m.set(i, j, e);
                }
            }
            m
        })
        .collect();
    PresheafHom::new_unchecked(f.clone(), fam.presheaf.clone(), comps)
}

/// `L²F` with the unit `F → L²F`.
pub fn sheafify(f: &Presheaf) -> (Presheaf, PresheafHom) {
    let fam = families(f);
    let unit = unit_of(f, &fam);
    (fam.presheaf, unit)
}

/// `L²φ : L²F → L²G`.
pub fn sheafify_hom(phi: &PresheafHom) -> PresheafHom {
    let space = phi.source.space();
    let ring = *phi.source.ring();
    let fs = families(&phi.source);
    let gs = families(&phi.target);
    let comps = (0..space.nopens())
        .map(|u| {
            let ks = &fs.kernels[u];
            let kt = &gs.kernels[u];
            let mut m = Mat::zeros(kt.module.ngens(), ks.module.ngens());
            for j in 0..ks.module.ngens() {
                let x = ks.lifts.col(j);
                let mut y = Vec::new();
                for &(p, off) in &fs.blocks[u] {
                    let up = space.min_open_id(p);
                    let len = phi.source.value(up).ngens();
                    y.extend(phi.component(up).apply(&x[off..off + len], &ring));
                }
                let c = kt.coords(&y).expect("image of a family is a family");
                for (i, e) in c.into_iter().enumerate() {
                    m.set(i, j, e);
                }
            }
            m
        })
        .collect();
    PresheafHom::new_unchecked(fs.presheaf, gs.presheaf, comps)
}

/// Every open satisfies the gluing condition for its cover by minimal opens.
pub fn is_sheaf(f: &Presheaf) -> bool {
    sheafify(f).1.is_iso()
}

pub fn stalk(f: &Presheaf, p: usize) -> Module {
    f.value(f.space().min_open_id(p)).clone()
}

pub fn stalk_hom(h: &PresheafHom, p: usize) -> ModHom {
    h.component_hom(h.source.space().min_open_id(p))
}

/// Points with nonzero stalk.
pub fn support(f: &Presheaf) -> PointSet {
    let space = f.space();
    (0..space.npoints())
        .filter(|&p| !stalk(f, p).is_zero())
        .fold(PointSet::EMPTY, |acc, p| acc.union(PointSet::singleton(p)))
}
