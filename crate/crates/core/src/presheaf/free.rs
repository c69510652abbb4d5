use std::sync::Arc;

use num_traits::Zero;

use super::{Cell, Presheaf, PresheafHom};
use crate::error::{Error, Result};
use crate::linalg::{Elem, Mat, ModHom, Module, Ring};
use crate::site::{FinSpace, OpenId, PointSet};

/// Indices of the cells whose open contains `d`.
pub(crate) fn active_cells(space: &FinSpace, cells: &[Cell], d: OpenId) -> Vec<usize> {
    let dset = space.open(d);
    (0..cells.len()).filter(|&i| dset.is_subset(space.open(cells[i].open))).collect()
}

impl Presheaf {
    /// `⊕ R_{C_i}/(a_i)`. Cells of unit order are zero and are dropped.
    pub fn cyclic_sum(space: Arc<FinSpace>, ring: Ring, cells: Vec<Cell>) -> Presheaf {
        let cells: Vec<Cell> = cells
            .into_iter()
            .map(|c| Cell { open: c.open, order: ring.associate(&ring.normalize(c.order)) })
            .filter(|c| !ring.is_unit(&c.order))
            .collect();
        let n = space.nopens();
        let active: Vec<Vec<usize>> = (0..n).map(|d| active_cells(&space, &cells, d)).collect();
        let values: Vec<Module> = active
            .iter()
            .map(|a| Module::from_orders(&ring, a.iter().map(|&i| cells[i].order.clone()).collect()))
            .collect();
        let mut p = Presheaf::from_fn(space, ring, values, |u, v| {
            let mut m = Mat::zeros(active[v].len(), active[u].len());
            for (c, i) in active[u].iter().enumerate() {
                let r = active[v].iter().position(|j| j == i).expect("cells active on U are active on V");
                m.set(r, c, ring.one());
            }
            m
        });
        p.set_cells(Some(cells));
        p
    }

    /// Generator index of cell `i` in the value at `d`, if the cell is active there.
    pub fn cell_generator(&self, i: usize, d: OpenId) -> Option<usize> {
        let cells = self.cells()?;
        active_cells(self.space(), cells, d).iter().position(|&j| j == i)
    }
}

/// The free presheaf `R_C`.
pub fn free_presheaf(space: Arc<FinSpace>, ring: Ring, c: PointSet) -> Result<Presheaf> {
    let id = space
        .open_id(c)
        .ok_or_else(|| Error::Precondition(format!("{} is not a nonempty open", space.format_set(c))))?;
    Ok(Presheaf::cyclic_sum(space, ring, vec![Cell { open: id, order: Elem::zero() }]))
}

/// The map out of a cyclic sum determined by one element `x_i ∈ X(C_i)` per
/// cell, each killed by the cell order.
pub fn cyclic_hom(source: &Presheaf, target: &Presheaf, elems: &[Vec<Elem>]) -> Result<PresheafHom> {
    source.check_compatible(target)?;
    let cells = source.cells().ok_or_else(|| Error::Precondition("source is not a cyclic sum".into()))?;
    if elems.len() != cells.len() {
        return Err(Error::Invalid(format!("{} elements for {} cells", elems.len(), cells.len())));
    }
    let ring = *source.ring();
    for (cell, x) in cells.iter().zip(elems) {
        let v = target.value(cell.open);
        if x.len() != v.ngens() {
            return Err(Error::Invalid("element has the wrong length".into()));
        }
        let scaled: Vec<Elem> = x.iter().map(|e| ring.mul(e, &cell.order)).collect();
        if !v.is_zero_elem(&scaled) {
            return Err(Error::Invalid("element is not killed by the cell order".into()));
        }
    }
    let space = source.space();
    let comps = (0..space.nopens())
        .map(|d| {
            let act = active_cells(space, cells, d);
            let mut m = Mat::zeros(target.value(d).ngens(), act.len());
            for (c, &i) in act.iter().enumerate() {
                let col = target.res(cells[i].open, d).apply(&elems[i], &ring);
                for (r, x) in col.into_iter().enumerate() {
                    m.set(r, c, x);
                }
            }
            m
        })
        .collect();
    Ok(PresheafHom::new_unchecked(source.clone(), target.clone(), comps))
}

/// The map `R_C → X` corresponding to `x ∈ X(C)`.
pub fn yoneda_hom(x: &Presheaf, c: OpenId, elem: &[Elem]) -> Result<PresheafHom> {
    let rc = free_presheaf(x.space_arc().clone(), *x.ring(), x.space().open(c))?;
    cyclic_hom(&rc, x, &[elem.to_vec()])
}

/// The element of `X(C)` classifying a map `R_C → X`.
pub fn yoneda_element(f: &PresheafHom, c: OpenId) -> Vec<Elem> {
    f.component(c).col(0)
}

/// An isomorphism `⊕ R_{C_i} → P` witnessing that `P` is free.
#[derive(Clone, Debug)]
pub struct FreeDecomposition {
    pub opens: Vec<OpenId>,
    pub iso: PresheafHom,
}

/// Decides whether `p` is a direct sum of free presheaves `R_C`.
///
/// At each open the new generators are a basis of `P(U)` modulo everything
/// restricted from strictly larger opens; that quotient has to be free and the
/// induced map from the resulting free presheaf has to be an isomorphism.
pub fn free_decomposition(p: &Presheaf) -> Option<FreeDecomposition> {
    let space = p.space();
    let ring = *p.ring();
    let mut order: Vec<OpenId> = (0..space.nopens()).collect();
    order.sort_by_key(|&u| (std::cmp::Reverse(space.open(u).len()), u));
    let mut cells = Vec::new();
    let mut elems = Vec::new();
    for &u in &order {
        let uset = space.open(u);
        let larger: Vec<OpenId> = (0..space.nopens()).filter(|&w| w != u && uset.is_subset(space.open(w))).collect();
        let mut gens = Mat::zeros(p.value(u).ngens(), 0);
        let mut srcs = Vec::new();
        for &w in &larger {
            gens = gens.hstack(p.res(w, u));
            srcs.push(p.value(w));
        }
        let h = ModHom::new_unchecked(Module::direct_sum_all(&ring, &srcs), p.value(u).clone(), gens);
        let q = h.cokernel_subquotient();
        if q.module.free_rank() != q.module.ngens() {
            return None;
        }
        for j in 0..q.module.ngens() {
            cells.push(Cell { open: u, order: Elem::zero() });
            elems.push(q.lifts.col(j));
        }
    }
    let source = Presheaf::cyclic_sum(p.space_arc().clone(), ring, cells.clone());
    let iso = cyclic_hom(&source, p, &elems).ok()?;
    iso.is_iso().then(|| FreeDecomposition { opens: cells.iter().map(|c| c.open).collect(), iso })
}
