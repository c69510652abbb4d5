use std::sync::Arc;

use crate::chain::{cokernel_complex, ChainMap, PComplex};
use crate::error::{Error, Result};
use crate::linalg::module::preimage_lattice;
use crate::linalg::{Elem, Mat, Subquotient};
use crate::presheaf::{direct_sum, free_decomposition, free_presheaf, Presheaf};
use crate::site::{FinSpace, OpenId};

use super::is_acyclic_fibration;

/// `f = second ∘ first` with `first` a relative cell complex and `second` an
/// acyclic fibration.
#[derive(Clone, Debug)]
pub struct Factorization {
    pub middle: PComplex,
    pub first: ChainMap,
    pub second: ChainMap,
    /// Attached cells `(C, n)`, each a free `R_C` in degree `n`, in attachment order.
    pub cells: Vec<(OpenId, i64)>,
}

struct CellRec {
    open: OpenId,
    degree: i64,
    /// Coordinates of `d e` in the middle term one degree down at `open`, as of attachment.
    boundary: Vec<Elem>,
    /// Coordinates of the image of `e` in `Y_degree(open)`.
    image: Vec<Elem>,
}

struct Builder<'a> {
    f: &'a ChainMap,
    cells: Vec<CellRec>,
}

impl Builder<'_> {
    fn space(&self) -> &Arc<FinSpace> {
        self.f.source.space_arc()
    }

    fn range(&self) -> (i64, i64) {
        let (lo, hi) = self.f.degree_range();
        let lo = self.cells.iter().map(|c| c.degree).fold(lo, i64::min);
        let hi = self.cells.iter().map(|c| c.degree).fold(hi, i64::max);
        (lo, hi)
    }

    fn cells_in(&self, n: i64) -> impl Iterator<Item = &CellRec> {
        self.cells.iter().filter(move |c| c.degree == n)
    }

    /// Number of generators of the middle term in degree `n` at `c`.
    fn ngens(&self, n: i64, c: OpenId) -> usize {
        let space = self.space();
        let set = space.open(c);
        self.f.source.module(n, c).ngens() + self.cells_in(n).filter(|r| set.is_subset(space.open(r.open))).count()
    }

    fn attach(&mut self, open: OpenId, degree: i64, boundary: Vec<Elem>, image: Vec<Elem>) {
        self.cells.push(CellRec { open, degree, boundary, image });
    }

    /// The middle complex, the inclusion of the source and the map to the target.
    fn build(&self) -> (PComplex, ChainMap, ChainMap) {
        let (x, y) = (&self.f.source, &self.f.target);
        let space = self.space().clone();
        let ring = *x.ring();
        let nop = space.nopens();
        let (lo, hi) = self.range();
        let terms: Vec<Presheaf> = (lo..=hi)
            .map(|n| {
                let frees: Vec<Presheaf> = self
                    .cells_in(n)
                    .map(|r| free_presheaf(space.clone(), ring, space.open(r.open)).expect("nonempty open"))
                    .collect();
                let mut parts = vec![x.term(n)];
                parts.extend(frees.iter());
                direct_sum(&parts)
            })
            .collect();
        let term = |n: i64| &terms[(n - lo) as usize];
        let active = |n: i64, u: OpenId| -> Vec<&CellRec> {
            let set = space.open(u);
            self.cells_in(n).filter(|r| set.is_subset(space.open(r.open))).collect()
        };
        let diffs = (lo + 1..=hi)
            .map(|n| {
                (0..nop)
                    .map(|u| {
                        let rows = term(n - 1).value(u).ngens();
                        let gx = x.module(n, u).ngens();
                        let act = active(n, u);
                        let mut m = Mat::zeros(rows, gx + act.len());
                        m.paste(0, 0, &x.d(n, u).vstack(&Mat::zeros(rows - x.module(n - 1, u).ngens(), gx)));
                        for (k, r) in act.iter().enumerate() {
                            let below = term(n - 1);
                            let mut b = r.boundary.clone();
                            b.resize(below.value(r.open).ngens(), ring.zero());
                            m.paste(0, gx + k, &Mat::column(below.res(r.open, u).apply(&b, &ring)));
                        }
                        m
                    })
                    .collect()
            })
            .collect();
        let middle = PComplex::from_parts(space.clone(), ring, lo, terms.clone(), diffs);
        let first = ChainMap::from_fn(x, &middle, |n, u| {
            let g = x.module(n, u).ngens();
            Mat::identity(g, &ring).vstack(&Mat::zeros(middle.module(n, u).ngens() - g, g))
        });
        let second = ChainMap::from_fn(&middle, y, |n, u| {
            let mut m = self.f.component(n, u);
            for r in active(n, u) {
                m = m.hstack(&Mat::column(y.res_at(n, r.open, u).apply(&r.image, &ring)));
            }
            m
        });
        (middle, first, second)
    }
}

/// Opens by decreasing size, ties broken by bitmask.
fn open_order(space: &FinSpace) -> Vec<OpenId> {
    let mut ids: Vec<OpenId> = (0..space.nopens()).collect();
    ids.sort_by_key(|&u| (std::cmp::Reverse(space.open(u).len()), space.open(u).0));
    ids
}

/// Factors `f` as a relative cell complex followed by an acyclic fibration.
///
/// Degrees are processed from the bottom. Disks are attached first until the
/// map is surjective; then cells `R_C[n + 1]` are attached along generators of
/// the homology of the kernel in degree `n` until the kernel is acyclic.
pub fn factor_cof_acyclicfib(f: &ChainMap) -> Result<Factorization> {
    let (x, y) = (&f.source, &f.target);
    x.check_compatible(y)?;
    let ring = *x.ring();
    let space = x.space_arc().clone();
    let order = open_order(&space);
    let mut b = Builder { f, cells: Vec::new() };

    if !y.is_empty() {
        for n in y.lo()..=y.hi() {
            for &c in &order {
                let (_, _, p) = b.build();
                let sq = p.component_mod(n, c).cokernel_subquotient();
                for yv in sq.lifts.columns() {
                    let pos = b.ngens(n - 1, c);
                    b.attach(c, n - 1, Vec::new(), y.d(n, c).apply(&yv, &ring));
                    let mut bd = vec![ring.zero(); pos + 1];
                    bd[pos] = ring.one();
                    b.attach(c, n, bd, yv);
                }
            }
        }
    }

    let (start, top) = b.range();
    let cap = top + space.nopens() as i64 + 2;
    let mut n = start;
    while n <= b.range().1 {
        if n > cap {
            return Err(Error::Invalid("cell attachment did not terminate".into()));
        }
        for &c in &order {
            let (m, _, p) = b.build();
            let g = m.module(n, c).ngens();
            let h = m.d(n, c).vstack(&p.component(n, c));
            let t = m.module(n - 1, c).direct_sum(y.module(n, c));
            let z = preimage_lattice(&ring, &h, &t);
            let k_above = preimage_lattice(&ring, &p.component(n + 1, c), y.module(n + 1, c));
            let bd = m.d(n + 1, c).mul(&k_above, &ring).hstack(&m.module(n, c).relation_columns());
            let sq = Subquotient::new(&ring, g, &z, &bd);
            for zv in sq.lifts.columns() {
                b.attach(c, n + 1, zv, vec![ring.zero(); y.module(n + 1, c).ngens()]);
            }
        }
        n += 1;
    }

    let (middle, first, second) = b.build();
    let cells = b.cells.iter().map(|r| (r.open, r.degree)).collect();
    let fac = Factorization { middle, first, second, cells };
    audit(f, &fac)?;
    Ok(fac)
}

fn audit(f: &ChainMap, fac: &Factorization) -> Result<()> {
    fac.middle.validate()?;
    fac.first.validate()?;
    fac.second.validate()?;
    if fac.second.compose(&fac.first) != *f {
        return Err(Error::Invalid("factorization does not compose to the input".into()));
    }
    if !fac.first.is_injective() {
        return Err(Error::Invalid("first map is not injective".into()));
    }
    let (q, _) = cokernel_complex(&fac.first);
    if q.terms().iter().any(|t| free_decomposition(t).is_none()) {
        return Err(Error::Invalid("cokernel of the first map is not levelwise free".into()));
    }
    if !is_acyclic_fibration(&fac.second) {
        return Err(Error::Invalid("second map is not an acyclic fibration".into()));
    }
    Ok(())
}

/// `K → X` with `K` levelwise free, from factoring `0 → X`.
pub fn cofibrant_replacement(x: &PComplex) -> Result<Factorization> {
    let zero = PComplex::zero(x.space_arc().clone(), *x.ring());
    factor_cof_acyclicfib(&ChainMap::zero(&zero, x))
}
