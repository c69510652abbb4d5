//! Mapping complexes of natural families and chain homotopy classes.
//!
//! `Hom_k(X, Y) = ∏_n Hom(X_n, Y_{n+k})` with `D φ = d ∘ φ - (-1)^k φ ∘ d`.
//! A block `Hom(X_n, Y_m)` is a subquotient of an ambient lattice: either all
//! per-open matrices cut down by well-definedness and naturality, or, when
//! `X_n = ⊕ R_{C_i}/(a_i)`, the Yoneda description `⊕ Y_m(C_i)[a_i]`.

use crate::linalg::module::preimage_lattice;
use num_traits::Zero;

use crate::linalg::{Elem, Mat, ModHom, Module, Subquotient};
use crate::presheaf::{active_cells, Cell};
use crate::site::OpenId;

use super::{ChainMap, PComplex};

#[derive(Clone, Debug)]
enum Layout {
    /// Ambient offsets of `Y_m(C_i)` for each cell.
    Yoneda { cells: Vec<Cell>, offsets: Vec<usize> },
    /// Ambient offsets of the row-major matrix block at each open.
    General { offsets: Vec<usize> },
}

/// `Hom(X_n, Y_m)` as a module.
#[derive(Clone, Debug)]
struct HomBlock {
    n: i64,
    m: i64,
    layout: Layout,
    sq: Subquotient,
}

impl HomBlock {
    fn new(x: &PComplex, y: &PComplex, n: i64, m: i64, force_general: bool) -> HomBlock {
        let ring = *x.ring();
        let space = x.space();
        let src = x.term(n);
        let dst = y.term(m);
        if let (Some(cells), false) = (src.cells(), force_general) {
            let mut offsets = Vec::new();
            let mut amb = 0;
            let mut zs = Vec::new();
            let mut bs = Vec::new();
            for c in cells {
                offsets.push(amb);
                let v = dst.value(c.open);
                amb += v.ngens();
                let scalar = Mat::identity(v.ngens(), &ring).scale(&c.order, &ring);
                zs.push(preimage_lattice(&ring, &scalar, v));
                bs.push(v.relation_columns());
            }
            let z = Mat::block_diag(&zs.iter().collect::<Vec<_>>());
            let b = Mat::block_diag(&bs.iter().collect::<Vec<_>>());
            let sq = Subquotient::new(&ring, amb, &z, &b);
            return HomBlock { n, m, layout: Layout::Yoneda { cells: cells.to_vec(), offsets }, sq };
        }
        let nop = space.nopens();
        let mut offsets = Vec::with_capacity(nop);
        let mut amb = 0;
        for u in 0..nop {
            offsets.push(amb);
            amb += dst.value(u).ngens() * src.value(u).ngens();
        }
        let idx = |u: OpenId, r: usize, c: usize| offsets[u] + r * src.value(u).ngens() + c;
        let mut rows: Vec<Vec<(usize, Elem)>> = Vec::new();
        let mut targets: Vec<&Module> = Vec::new();
        for u in 0..nop {
            let (sv, tv) = (src.value(u), dst.value(u));
            for (j, o) in sv.orders().iter().enumerate() {
                if o.is_zero() {
                    continue;
                }
                for r in 0..tv.ngens() {
                    rows.push(vec![(idx(u, r, j), o.clone())]);
                }
                targets.push(tv);
            }
        }
        for (u, v) in space.covering_pairs() {
            let (su, tv) = (src.value(u), dst.value(v));
            let ry = dst.res(u, v);
            let rx = src.res(u, v);
            // column j of res_Y φ_u - φ_v res_X, one row per generator of Y(V)
            for j in 0..su.ngens() {
                for r in 0..tv.ngens() {
                    let mut row = Vec::new();
                    for t in 0..dst.value(u).ngens() {
                        let a = ry.get(r, t);
                        if !a.is_zero() {
                            row.push((idx(u, t, j), a.clone()));
                        }
                    }
                    for t in 0..src.value(v).ngens() {
                        let a = rx.get(t, j);
                        if !a.is_zero() {
                            row.push((idx(v, r, t), ring.neg(a)));
                        }
                    }
                    rows.push(row);
                }
                targets.push(tv);
            }
        }
        let mut cmat = Mat::zeros(rows.len(), amb);
        for (i, row) in rows.into_iter().enumerate() {
            for (j, a) in row {
                let cur = cmat.get(i, j).clone();
                cmat.set(i, j, ring.add(&cur, &a));
            }
        }
        let tmod = Module::direct_sum_all(&ring, &targets);
        let z = preimage_lattice(&ring, &cmat, &tmod);
        let mut b = Mat::zeros(amb, 0);
        let mut bcols = Vec::new();
        for u in 0..nop {
            let tv = dst.value(u);
            for (r, o) in tv.orders().iter().enumerate() {
                if o.is_zero() {
                    continue;
                }
                for c in 0..src.value(u).ngens() {
                    bcols.push((idx(u, r, c), o.clone()));
                }
            }
        }
        if !bcols.is_empty() {
            b = Mat::zeros(amb, bcols.len());
            for (k, (i, o)) in bcols.into_iter().enumerate() {
                b.set(i, k, o);
            }
        }
        HomBlock { n, m, layout: Layout::General { offsets }, sq: Subquotient::new(&ring, amb, &z, &b) }
    }

    /// Per-open matrices `X_n(U) → Y_m(U)` of an ambient vector.
    fn components(&self, x: &PComplex, y: &PComplex, v: &[Elem]) -> Vec<Mat> {
        let ring = *x.ring();
        let space = x.space();
        let (src, dst) = (x.term(self.n), y.term(self.m));
        match &self.layout {
            Layout::Yoneda { cells, offsets } => (0..space.nopens())
                .map(|u| {
                    let act = active_cells(space, cells, u);
                    let mut mat = Mat::zeros(dst.value(u).ngens(), act.len());
                    for (c, &i) in act.iter().enumerate() {
                        let len = dst.value(cells[i].open).ngens();
                        let col = dst.res(cells[i].open, u).apply(&v[offsets[i]..offsets[i] + len], &ring);
                        for (r, e) in col.into_iter().enumerate() {
                            mat.set(r, c, e);
                        }
                    }
                    mat
                })
                .collect(),
            Layout::General { offsets } => (0..space.nopens())
                .map(|u| {
                    let (rows, cols) = (dst.value(u).ngens(), src.value(u).ngens());
                    let mut mat = Mat::zeros(rows, cols);
                    for r in 0..rows {
                        for c in 0..cols {
                            mat.set(r, c, v[offsets[u] + r * cols + c].clone());
                        }
                    }
                    mat
                })
                .collect(),
        }
    }

    /// Ambient vector of a natural family given per open.
    fn ambient(&self, x: &PComplex, comps: &[Mat]) -> Vec<Elem> {
        let src = x.term(self.n);
        match &self.layout {
            Layout::Yoneda { cells, .. } => {
                let mut v = Vec::new();
                for (i, c) in cells.iter().enumerate() {
                    let g = src.cell_generator(i, c.open).expect("cell is active on its own open");
                    v.extend(comps[c.open].col(g));
                }
                v
            }
            Layout::General { .. } => {
                let mut v = Vec::new();
                for m in comps {
                    for r in 0..m.rows() {
                        v.extend_from_slice(m.row(r));
                    }
                }
                v
            }
        }
    }
}

/// The degree-`k` term of the mapping complex.
#[derive(Clone, Debug)]
pub struct HomSpace {
    pub k: i64,
    blocks: Vec<HomBlock>,
    pub module: Module,
}

impl HomSpace {
    fn new(x: &PComplex, y: &PComplex, k: i64, force_general: bool) -> HomSpace {
        let blocks: Vec<HomBlock> = (x.lo()..=x.hi())
            .filter(|n| n + k >= y.lo() && n + k <= y.hi())
            .map(|n| HomBlock::new(x, y, n, n + k, force_general))
            .collect();
        let module = Module::direct_sum_all(x.ring(), &blocks.iter().map(|b| &b.sq.module).collect::<Vec<_>>());
        HomSpace { k, blocks, module }
    }

    fn block_offset(&self, i: usize) -> usize {
        self.blocks[..i].iter().map(|b| b.sq.module.ngens()).sum()
    }

    /// The family `{φ_n}` of a module element, as `(n, per-open matrices)`.
    pub fn family(&self, x: &PComplex, y: &PComplex, v: &[Elem]) -> Vec<(i64, Vec<Mat>)> {
        self.blocks
            .iter()
            .enumerate()
            .map(|(i, b)| {
                let off = self.block_offset(i);
                let amb = b.sq.lift(&v[off..off + b.sq.module.ngens()]);
                (b.n, b.components(x, y, &amb))
            })
            .collect()
    }

    /// Module coordinates of a family given by `f(n, u)`; `None` if it is not natural.
    pub fn coords(&self, x: &PComplex, f: impl Fn(i64, OpenId) -> Mat) -> Option<Vec<Elem>> {
        let mut out = Vec::with_capacity(self.module.ngens());
        for b in &self.blocks {
            let comps: Vec<Mat> = (0..x.space().nopens()).map(|u| f(b.n, u)).collect();
            out.extend(b.sq.coords(&b.ambient(x, &comps))?);
        }
        Some(out)
    }
}

/// A bounded complex of plain modules.
#[derive(Clone, Debug)]
pub struct ModComplex {
    pub lo: i64,
    pub modules: Vec<Module>,
    /// `diffs[i]`: from degree `lo + i + 1` to `lo + i`.
    pub diffs: Vec<ModHom>,
}

impl ModComplex {
    pub fn hi(&self) -> i64 {
        self.lo + self.modules.len() as i64 - 1
    }

    fn homology_sq(&self, k: i64) -> Option<Subquotient> {
        if k < self.lo || k > self.hi() {
            return None;
        }
        let i = (k - self.lo) as usize;
        let m = &self.modules[i];
        let ring = *m.ring();
        let z = if i > 0 {
            preimage_lattice(&ring, &self.diffs[i - 1].matrix, &self.modules[i - 1])
        } else {
            Mat::identity(m.ngens(), &ring)
        };
        let mut b = m.relation_columns();
        if i < self.diffs.len() {
            b = self.diffs[i].matrix.hstack(&b);
        }
        Some(Subquotient::new(&ring, m.ngens(), &z, &b))
    }

    pub fn homology(&self, k: i64) -> Option<Module> {
        self.homology_sq(k).map(|s| s.module)
    }
}

/// Mapping complex data around degree 0.
#[derive(Clone, Debug)]
pub struct MappingComplex {
    pub x: PComplex,
    pub y: PComplex,
    pub spaces: Vec<HomSpace>,
    pub lo: i64,
    diffs: Vec<ModHom>,
}

impl MappingComplex {
    /// Terms `Hom_k` for `k ∈ [kmin, kmax]` with the differentials between them.
    pub fn new(x: &PComplex, y: &PComplex, kmin: i64, kmax: i64) -> MappingComplex {
        MappingComplex::build(x, y, kmin, kmax, false)
    }

    /// Same, never using the Yoneda description.
    pub fn new_general(x: &PComplex, y: &PComplex, kmin: i64, kmax: i64) -> MappingComplex {
        MappingComplex::build(x, y, kmin, kmax, true)
    }

    fn build(x: &PComplex, y: &PComplex, kmin: i64, kmax: i64, general: bool) -> MappingComplex {
        let spaces: Vec<HomSpace> = (kmin..=kmax).map(|k| HomSpace::new(x, y, k, general)).collect();
        let diffs = (1..spaces.len()).map(|i| differential(x, y, &spaces[i], &spaces[i - 1])).collect();
        MappingComplex { x: x.clone(), y: y.clone(), spaces, lo: kmin, diffs }
    }

    /// The full mapping complex.
    pub fn full(x: &PComplex, y: &PComplex) -> MappingComplex {
        if x.is_empty() || y.is_empty() {
            return MappingComplex::new(x, y, 0, 0);
        }
        MappingComplex::new(x, y, y.lo() - x.hi() - 1, y.hi() - x.lo() + 1)
    }

    pub fn space(&self, k: i64) -> &HomSpace {
        &self.spaces[(k - self.lo) as usize]
    }

    pub fn as_mod_complex(&self) -> ModComplex {
        ModComplex {
            lo: self.lo,
            modules: self.spaces.iter().map(|s| s.module.clone()).collect(),
            diffs: self.diffs.clone(),
        }
    }

    /// `D : Hom_k → Hom_{k-1}`.
    pub fn d(&self, k: i64) -> &ModHom {
        &self.diffs[(k - self.lo - 1) as usize]
    }

    pub fn to_chain_map(&self, v: &[Elem]) -> ChainMap {
        let fam = self.space(0).family(&self.x, &self.y, v);
        ChainMap::from_fn(&self.x, &self.y, |n, u| {
            fam.iter()
                .find(|(m, _)| *m == n)
                .map(|(_, c)| c[u].clone())
                .unwrap_or_else(|| Mat::zeros(self.y.module(n, u).ngens(), self.x.module(n, u).ngens()))
        })
    }

    pub fn chain_map_coords(&self, f: &ChainMap) -> Vec<Elem> {
        self.space(0).coords(&self.x, |n, u| f.component(n, u)).expect("chain maps are natural")
    }
}

fn differential(x: &PComplex, y: &PComplex, src: &HomSpace, dst: &HomSpace) -> ModHom {
    let ring = *x.ring();
    let k = src.k;
    let sgn = ring.from_i64(if k.rem_euclid(2) == 0 { -1 } else { 1 });
    let mut mat = Mat::zeros(dst.module.ngens(), src.module.ngens());
    for j in 0..src.module.ngens() {
        let mut e = vec![ring.zero(); src.module.ngens()];
        e[j] = ring.one();
        let fam = src.family(x, y, &e);
        let get = |n: i64, u: OpenId| -> Mat {
            // (Dφ)_n = d φ_n - (-1)^k φ_{n-1} d
            let phi_n = fam.iter().find(|(m, _)| *m == n).map(|(_, c)| c[u].clone());
            let phi_prev = fam.iter().find(|(m, _)| *m == n - 1).map(|(_, c)| c[u].clone());
            let mut out = Mat::zeros(y.module(n + k - 1, u).ngens(), x.module(n, u).ngens());
            if let Some(p) = phi_n {
                out = out.add(&y.d(n + k, u).mul(&p, &ring), &ring);
            }
            if let Some(p) = phi_prev {
                out = out.add(&p.mul(&x.d(n, u), &ring).scale(&sgn, &ring), &ring);
            }
            out
        };
        let c = dst.coords(x, get).expect("D preserves natural families");
        for (i, v) in c.into_iter().enumerate() {
            mat.set(i, j, v);
        }
    }
    ModHom::new_unchecked(src.module.clone(), dst.module.clone(), mat)
}

/// Chain maps `X → Y`: the degree-0 cycles, with generators.
pub fn chain_maps(x: &PComplex, y: &PComplex) -> (Module, Vec<ChainMap>) {
    let mc = MappingComplex::new(x, y, -1, 0);
    let (z, incl) = mc.d(0).kernel();
    let gens = (0..z.ngens()).map(|j| mc.to_chain_map(&incl.matrix.col(j))).collect();
    (z, gens)
}

/// Chain homotopy classes of maps `X → Y`.
pub fn homotopy_classes(x: &PComplex, y: &PComplex) -> Module {
    HomotopyClasses::new(x, y).module().clone()
}

/// `H_0` of the mapping complex with class lookup.
#[derive(Clone, Debug)]
pub struct HomotopyClasses {
    mc: MappingComplex,
    sq: Subquotient,
}

impl HomotopyClasses {
    pub fn new(x: &PComplex, y: &PComplex) -> HomotopyClasses {
        let mc = MappingComplex::new(x, y, -1, 1);
        let sq = mc.as_mod_complex().homology_sq(0).expect("degree 0 present");
        HomotopyClasses { mc, sq }
    }

    pub fn module(&self) -> &Module {
        &self.sq.module
    }

    pub fn class_of(&self, f: &ChainMap) -> Vec<Elem> {
        let v = self.mc.chain_map_coords(f);
        self.sq.coords(&v).expect("chain maps are cycles")
    }

    pub fn is_null_homotopic(&self, f: &ChainMap) -> bool {
        self.class_of(f).iter().all(|e| e.is_zero())
    }

    /// A chain map representing each generator of the homotopy classes.
    pub fn representatives(&self) -> Vec<ChainMap> {
        (0..self.sq.module.ngens()).map(|j| self.mc.to_chain_map(&self.sq.lifts.col(j))).collect()
    }

    /// A homotopy `h` with `D h = f`, as `(n, per-open X_n → Y_{n+1})`.
    pub fn null_homotopy(&self, f: &ChainMap) -> Option<Vec<(i64, Vec<Mat>)>> {
        let v = self.mc.chain_map_coords(f);
        let h = self.mc.d(1).solve(&v)?;
        Some(self.mc.space(1).family(&self.mc.x, &self.mc.y, &h))
    }
}
