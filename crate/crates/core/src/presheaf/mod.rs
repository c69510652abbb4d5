//! Presheaves of finitely presented modules on a finite space.
//!
//! Values are stored on every nonempty open together with the restriction
//! matrices for every nested pair, so that constructions whose level varies
//! from open to open stay simple. Presheaves built as direct sums of cyclic
//! free presheaves `R_C/(a)` remember that decomposition, which lets hom
//! computations use the Yoneda description directly.

mod algebra;
mod free;
mod sheaf;

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::{Elem, Mat, ModHom, Module, Ring};
use crate::site::{FinSpace, OpenId, PointSet};

pub(crate) use algebra::kron_pairs;
pub use algebra::{direct_sum, direct_sum_maps, tensor, tensor_hom, tensor_unitor};
pub(crate) use free::active_cells;
pub use free::{cyclic_hom, free_decomposition, free_presheaf, yoneda_element, yoneda_hom, FreeDecomposition};
pub use sheaf::{is_sheaf, sheafify, sheafify_hom, stalk, stalk_hom, support};

/// A cell `R_C/(a)` of a cyclic sum: the open `C` and the order `a` (0 for free).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cell {
    pub open: OpenId,
    pub order: Elem,
}

#[derive(Clone, Debug)]
pub struct Presheaf {
    space: Arc<FinSpace>,
    ring: Ring,
    values: Vec<Module>,
    res: Vec<Option<Mat>>,
    cells: Option<Vec<Cell>>,
}

impl PartialEq for Presheaf {
    fn eq(&self, other: &Presheaf) -> bool {
        same_space(&self.space, &other.space)
            && self.ring == other.ring
            && self.values == other.values
            && self.res == other.res
    }
}

impl Eq for Presheaf {}

pub(crate) fn same_space(a: &Arc<FinSpace>, b: &Arc<FinSpace>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl Presheaf {
    /// Builds a presheaf from its values and restriction matrices along covering
    /// pairs `V ⋖ U`, keyed by `(U, V)`. Restrictions along longer chains are
    /// composed and checked to agree along every path.
    pub fn new(
        space: Arc<FinSpace>,
        ring: Ring,
        values: Vec<Module>,
        covering: &[((OpenId, OpenId), Mat)],
    ) -> Result<Presheaf> {
        let n = space.nopens();
        if values.len() != n {
            return Err(Error::Invalid(format!("{} values for {n} opens", values.len())));
        }
        if values.iter().any(|m| *m.ring() != ring) {
            return Err(Error::RingMismatch("presheaf value over a different ring".into()));
        }
        let mut res: Vec<Option<Mat>> = vec![None; n * n];
        for ((u, v), m) in covering {
            let (u, v) = (*u, *v);
            if u >= n || v >= n || !space.open(v).is_subset(space.open(u)) || u == v {
                return Err(Error::Invalid(format!("restriction {u}->{v} is not along a proper inclusion")));
            }
            let h = ModHom::new(values[u].clone(), values[v].clone(), m.clone())?;
            res[u * n + v] = Some(h.matrix);
        }
        for u in 0..n {
            res[u * n + u] = Some(Mat::identity(values[u].ngens(), &ring));
        }
        // fill by increasing size difference
        let mut pairs: Vec<(OpenId, OpenId)> = (0..n)
            .flat_map(|u| (0..n).map(move |v| (u, v)))
            .filter(|&(u, v)| u != v && space.open(v).is_subset(space.open(u)))
            .collect();
        pairs.sort_by_key(|&(u, v)| space.open(u).len() - space.open(v).len());
        for &(u, v) in &pairs {
            if res[u * n + v].is_some() {
                continue;
            }
            if values[u].is_zero() || values[v].is_zero() {
                res[u * n + v] = Some(Mat::zeros(values[v].ngens(), values[u].ngens()));
                continue;
            }
            let w = (0..n)
                .find(|&w| {
                    w != u
                        && w != v
                        && space.open(v).is_subset(space.open(w))
                        && space.open(w).is_subset(space.open(u))
                        && res[u * n + w].is_some()
                        && res[w * n + v].is_some()
                })
                .ok_or_else(|| {
                    Error::Invalid(format!(
                        "missing restriction {} -> {}",
                        space.format_set(space.open(u)),
                        space.format_set(space.open(v))
                    ))
                })?;
            let m = res[w * n + v].as_ref().unwrap().mul(res[u * n + w].as_ref().unwrap(), &ring);
            res[u * n + v] = Some(values[v].reduce_rows(&m));
        }
        let p = Presheaf { space, ring, values, res, cells: None };
        p.validate()?;
        Ok(p)
    }

    /// Builds a presheaf from a function giving the restriction matrix for each
    /// nested pair `(U, V)`.
    pub(crate) fn from_fn(
        space: Arc<FinSpace>,
        ring: Ring,
        values: Vec<Module>,
        mut f: impl FnMut(OpenId, OpenId) -> Mat,
    ) -> Presheaf {
        let n = space.nopens();
        let mut res = vec![None; n * n];
        for u in 0..n {
            for v in 0..n {
                if space.open(v).is_subset(space.open(u)) {
                    let m = if u == v { Mat::identity(values[u].ngens(), &ring) } else { f(u, v) };
                    res[u * n + v] = Some(values[v].reduce_rows(&m));
                }
            }
        }
        Presheaf { space, ring, values, res, cells: None }
    }

    pub fn zero(space: Arc<FinSpace>, ring: Ring) -> Presheaf {
        let values = vec![Module::zero(&ring); space.nopens()];
        let mut p = Presheaf::from_fn(space, ring, values, |_, _| Mat::zeros(0, 0));
        p.cells = Some(Vec::new());
        p
    }

    /// The constant presheaf with value `m` and identity restrictions.
    pub fn constant(space: Arc<FinSpace>, m: &Module) -> Presheaf {
        let ring = *m.ring();
        let values = vec![m.clone(); space.nopens()];
        let full = space.open_id(space.all_points()).expect("whole space is open");
        let mut p = Presheaf::from_fn(space, ring, values, |_, _| Mat::identity(m.ngens(), &ring));
        p.cells = Some(m.orders().iter().map(|o| Cell { open: full, order: o.clone() }).collect());
        p
    }

    /// Checks well-definedness of every restriction and functoriality along all chains.
    pub fn validate(&self) -> Result<()> {
        let n = self.space.nopens();
        for u in 0..n {
            for v in 0..n {
                let nested = self.space.open(v).is_subset(self.space.open(u));
                match (&self.res[u * n + v], nested) {
                    (Some(m), true) => {
                        ModHom::new(self.values[u].clone(), self.values[v].clone(), m.clone())?;
                    }
                    (None, false) => {}
                    _ => return Err(Error::Invalid(format!("restriction table malformed at {u}->{v}"))),
                }
            }
        }
        for u in 0..n {
            for v in self.space.subopens(self.space.open(u)) {
                for w in self.space.subopens(self.space.open(v)) {
                    let direct = self.restriction(u, w);
                    let via = self.restriction(v, w).compose(&self.restriction(u, v));
                    if direct != via {
                        return Err(Error::Invalid(format!(
                            "restrictions do not compose along {} ⊇ {} ⊇ {}",
                            self.space.format_set(self.space.open(u)),
                            self.space.format_set(self.space.open(v)),
                            self.space.format_set(self.space.open(w))
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn space(&self) -> &FinSpace {
        &self.space
    }

    pub fn space_arc(&self) -> &Arc<FinSpace> {
        &self.space
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn value(&self, u: OpenId) -> &Module {
        &self.values[u]
    }

    pub fn values(&self) -> &[Module] {
        &self.values
    }

    pub fn value_at(&self, u: PointSet) -> Option<&Module> {
        self.space.open_id(u).map(|i| &self.values[i])
    }

    /// Restriction matrix from `F(U)` to `F(V)`; panics unless `V ⊆ U`.
    pub fn res(&self, u: OpenId, v: OpenId) -> &Mat {
        self.res[u * self.space.nopens() + v]
            .as_ref()
            .unwrap_or_else(|| panic!("open {v} is not contained in open {u}"))
    }

    pub fn restriction(&self, u: OpenId, v: OpenId) -> ModHom {
        ModHom::new_unchecked(self.values[u].clone(), self.values[v].clone(), self.res(u, v).clone())
    }

    /// The cyclic-sum decomposition, when this presheaf was built as one.
    pub fn cells(&self) -> Option<&[Cell]> {
        self.cells.as_deref()
    }

    pub(crate) fn set_cells(&mut self, cells: Option<Vec<Cell>>) {
        self.cells = cells;
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Module::is_zero)
    }

    pub fn total_gens(&self) -> usize {
        self.values.iter().map(Module::ngens).sum()
    }

    pub fn check_compatible(&self, other: &Presheaf) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch(format!("{} vs {}", self.ring, other.ring)));
        }
        if !same_space(&self.space, &other.space) {
            return Err(Error::Precondition("presheaves live on different spaces".into()));
        }
        Ok(())
    }

    /// Presheaf isomorphism up to choosing bases: values and restrictions agree
    /// after the module normal forms, which is exact for cyclic sums. For the
    /// general question use an explicit [`PresheafHom`] and [`PresheafHom::is_iso`].
    pub fn same_shape(&self, other: &Presheaf) -> bool {
        self.values.len() == other.values.len()
            && self.values.iter().zip(&other.values).all(|(a, b)| a.is_isomorphic(b))
    }
}

/// A natural transformation, one matrix per open.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PresheafHom {
    pub source: Presheaf,
    pub target: Presheaf,
    components: Vec<Mat>,
}

impl PresheafHom {
    /// Validates well-definedness of each component and naturality.
    pub fn new(source: Presheaf, target: Presheaf, components: Vec<Mat>) -> Result<PresheafHom> {
        source.check_compatible(&target)?;
        if components.len() != source.space.nopens() {
            return Err(Error::Invalid("one component per open is required".into()));
        }
        let mut comps = Vec::with_capacity(components.len());
        for (u, m) in components.into_iter().enumerate() {
            comps.push(ModHom::new(source.values[u].clone(), target.values[u].clone(), m)?.matrix);
        }
        let h = PresheafHom { source, target, components: comps };
        h.check_naturality()?;
        Ok(h)
    }

    pub(crate) fn new_unchecked(source: Presheaf, target: Presheaf, components: Vec<Mat>) -> PresheafHom {
        let components = components.into_iter().enumerate().map(|(u, m)| target.values[u].reduce_rows(&m)).collect();
        PresheafHom { source, target, components }
    }

    pub fn identity(p: &Presheaf) -> PresheafHom {
        let comps = p.values.iter().map(|m| Mat::identity(m.ngens(), &p.ring)).collect();
        PresheafHom { source: p.clone(), target: p.clone(), components: comps }
    }

    pub fn zero(source: &Presheaf, target: &Presheaf) -> PresheafHom {
        let comps = (0..source.space.nopens())
            .map(|u| Mat::zeros(target.values[u].ngens(), source.values[u].ngens()))
            .collect();
        PresheafHom { source: source.clone(), target: target.clone(), components: comps }
    }

    pub fn component(&self, u: OpenId) -> &Mat {
        &self.components[u]
    }

    pub fn components(&self) -> &[Mat] {
        &self.components
    }

    pub fn component_hom(&self, u: OpenId) -> ModHom {
        ModHom::new_unchecked(self.source.values[u].clone(), self.target.values[u].clone(), self.components[u].clone())
    }

    pub fn check_naturality(&self) -> Result<()> {
        let space = &self.source.space;
        let ring = &self.source.ring;
        for u in 0..space.nopens() {
            for v in space.subopens(space.open(u)) {
                if u == v {
                    continue;
                }
                let a = self.target.res(u, v).mul(&self.components[u], ring);
                let b = self.components[v].mul(self.source.res(u, v), ring);
                let tv = &self.target.values[v];
                if tv.reduce_rows(&a) != tv.reduce_rows(&b) {
                    return Err(Error::Invalid(format!(
                        "naturality fails for {} ⊇ {}",
                        space.format_set(space.open(u)),
                        space.format_set(space.open(v))
                    )));
                }
            }
        }
        Ok(())
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &PresheafHom) -> PresheafHom {
        let ring = self.source.ring;
        let comps = self.components.iter().zip(&first.components).map(|(a, b)| a.mul(b, &ring)).collect();
        PresheafHom::new_unchecked(first.source.clone(), self.target.clone(), comps)
    }

    pub fn add(&self, other: &PresheafHom) -> PresheafHom {
        let ring = self.source.ring;
        let comps = self.components.iter().zip(&other.components).map(|(a, b)| a.add(b, &ring)).collect();
        PresheafHom::new_unchecked(self.source.clone(), self.target.clone(), comps)
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Mat::is_zero)
    }

    pub fn is_iso(&self) -> bool {
        (0..self.components.len()).all(|u| self.component_hom(u).is_iso())
    }

    pub fn is_injective(&self) -> bool {
        (0..self.components.len()).all(|u| self.component_hom(u).is_injective())
    }

    pub fn is_surjective(&self) -> bool {
        (0..self.components.len()).all(|u| self.component_hom(u).is_surjective())
    }

    /// Levelwise kernel with its inclusion.
    pub fn kernel(&self) -> (Presheaf, PresheafHom) {
        algebra::kernel(self)
    }

    /// Levelwise cokernel with its projection.
    pub fn cokernel(&self) -> (Presheaf, PresheafHom) {
        algebra::cokernel(self)
    }
}

#[cfg(test)]
mod tests;
