use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::linalg::{Mat, Module};
use crate::presheaf::{direct_sum, kron_pairs, tensor, Presheaf};
use crate::site::OpenId;

use super::{ChainMap, PComplex};

fn sign(k: i64) -> i64 {
    if k.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// `X[k]` with `X[k]_n = X_{n-k}` and differential `(-1)^k d`.
pub fn shift(x: &PComplex, k: i64) -> PComplex {
    let ring = *x.ring();
    let s = ring.from_i64(sign(k));
    let diffs =
        (x.lo() + 1..=x.hi()).map(|n| (0..x.space().nopens()).map(|u| x.d(n, u).scale(&s, &ring)).collect()).collect();
    PComplex::from_parts(x.space_arc().clone(), ring, x.lo() + k, x.terms().to_vec(), diffs)
}

/// `f[k] : X[k] → Y[k]`.
pub fn shift_map(f: &ChainMap, k: i64) -> ChainMap {
    let (xs, ys) = (shift(&f.source, k), shift(&f.target, k));
    ChainMap::from_fn(&xs, &ys, |n, u| f.component(n - k, u))
}

fn span(ranges: &[(i64, i64)]) -> Option<(i64, i64)> {
    let nonempty: Vec<&(i64, i64)> = ranges.iter().filter(|(a, b)| a <= b).collect();
    Some((nonempty.iter().map(|r| r.0).min()?, nonempty.iter().map(|r| r.1).max()?))
}

/// Builds a complex from per-degree terms and a block differential.
fn assemble(
    like: &PComplex,
    lo: i64,
    hi: i64,
    term: impl Fn(i64) -> Presheaf,
    d: impl Fn(i64, OpenId) -> Mat,
) -> PComplex {
    let terms: Vec<Presheaf> = (lo..=hi).map(&term).collect();
    let diffs = (lo + 1..=hi).map(|n| (0..like.space().nopens()).map(|u| d(n, u)).collect()).collect();
    PComplex::from_parts(like.space_arc().clone(), *like.ring(), lo, terms, diffs)
}

/// `cone(f)_n = X_{n-1} ⊕ Y_n` with `d(x, y) = (-dx, f x + dy)`.
pub fn cone(f: &ChainMap) -> PComplex {
    let (x, y) = (&f.source, &f.target);
    let ring = *x.ring();
    let Some((lo, hi)) = span(&[(x.lo() + 1, x.hi() + 1), (y.lo(), y.hi())]) else {
        return PComplex::zero(x.space_arc().clone(), ring);
    };
    assemble(
        x,
        lo,
        hi,
        |n| direct_sum(&[x.term(n - 1), y.term(n)]),
        |n, u| {
            let (a, b) = (x.module(n - 1, u).ngens(), y.module(n, u).ngens());
            let (c, e) = (x.module(n - 2, u).ngens(), y.module(n - 1, u).ngens());
            let mut m = Mat::zeros(c + e, a + b);
            m.paste(0, 0, &x.d(n - 1, u).neg(&ring));
            m.paste(c, 0, &f.component(n - 1, u));
            m.paste(c, a, &y.d(n, u));
            m
        },
    )
}

/// `Y → cone(f)`, `y ↦ (0, y)`.
pub fn cone_inclusion(f: &ChainMap) -> ChainMap {
    let c = cone(f);
    let ring = *c.ring();
    ChainMap::from_fn(&f.target, &c, |n, u| {
        let a = f.source.module(n - 1, u).ngens();
        let b = f.target.module(n, u).ngens();
        let mut m = Mat::zeros(a + b, b);
        m.paste(a, 0, &Mat::identity(b, &ring));
        m
    })
}

/// `cone(f) → X[1]`, `(x, y) ↦ x`.
pub fn cone_projection(f: &ChainMap) -> ChainMap {
    let c = cone(f);
    let x1 = shift(&f.source, 1);
    let ring = *c.ring();
    ChainMap::from_fn(&c, &x1, |n, u| {
        let a = f.source.module(n - 1, u).ngens();
        let b = f.target.module(n, u).ngens();
        let mut m = Mat::zeros(a, a + b);
        m.paste(0, 0, &Mat::identity(a, &ring));
        m
    })
}

/// `hofib(f) = cone(f)[-1]`: `hofib_n = X_n ⊕ Y_{n+1}`, `d(x, y) = (dx, -f x - dy)`.
pub fn hofib(f: &ChainMap) -> PComplex {
    shift(&cone(f), -1)
}

/// `hofib(f) → X`, `(x, y) ↦ x`.
pub fn hofib_projection(f: &ChainMap) -> ChainMap {
    let h = hofib(f);
    let ring = *h.ring();
    ChainMap::from_fn(&h, &f.source, |n, u| {
        let a = f.source.module(n, u).ngens();
        let b = f.target.module(n + 1, u).ngens();
        let mut m = Mat::zeros(a, a + b);
        m.paste(0, 0, &Mat::identity(a, &ring));
        m
    })
}

/// `Y[-1] → hofib(f)`, `y ↦ (0, y)`.
pub fn hofib_inclusion(f: &ChainMap) -> ChainMap {
    let h = hofib(f);
    let y1 = shift(&f.target, -1);
    let ring = *h.ring();
    ChainMap::from_fn(&y1, &h, |n, u| {
        let a = f.source.module(n, u).ngens();
        let b = f.target.module(n + 1, u).ngens();
        let mut m = Mat::zeros(a + b, b);
        m.paste(a, 0, &Mat::identity(b, &ring));
        m
    })
}

/// Termwise direct sum of complexes.
pub fn direct_sum_complex(parts: &[&PComplex]) -> PComplex {
    let first = parts[0];
    let ranges: Vec<(i64, i64)> = parts.iter().map(|p| (p.lo(), p.hi())).collect();
    let Some((lo, hi)) = span(&ranges) else {
        return PComplex::zero(first.space_arc().clone(), *first.ring());
    };
    assemble(
        first,
        lo,
        hi,
        |n| direct_sum(&parts.iter().map(|p| p.term(n)).collect::<Vec<_>>()),
        |n, u| Mat::block_diag(&parts.iter().map(|p| p.d(n, u)).collect::<Vec<_>>().iter().collect::<Vec<_>>()),
    )
}

/// Inclusions and projections of a direct sum of complexes.
pub fn direct_sum_maps(parts: &[&PComplex]) -> (PComplex, Vec<ChainMap>, Vec<ChainMap>) {
    let sum = direct_sum_complex(parts);
    let ring = *sum.ring();
    let mut incl = Vec::new();
    let mut proj = Vec::new();
    for (k, part) in parts.iter().enumerate() {
        let block = |n: i64, u: OpenId| {
            let off: usize = parts[..k].iter().map(|p| p.module(n, u).ngens()).sum();
            let g = part.module(n, u).ngens();
            let mut m = Mat::zeros(sum.module(n, u).ngens(), g);
            m.paste(off, 0, &Mat::identity(g, &ring));
            m
        };
        incl.push(ChainMap::from_fn(part, &sum, block));
        proj.push(ChainMap::from_fn(&sum, part, |n, u| block(n, u).transpose()));
    }
    (sum, incl, proj)
}

/// Layout of one degree of a total tensor complex at one open.
struct Blocks {
    /// `(i, j, offset, generator pairs)` for each summand `X_i ⊗ Y_j`.
    blocks: Vec<(i64, i64, usize, Vec<(usize, usize)>)>,
}

impl Blocks {
    fn new(x: &PComplex, y: &PComplex, n: i64, u: OpenId) -> Blocks {
        let mut blocks = Vec::new();
        let mut off = 0;
        for i in x.lo()..=x.hi() {
            let j = n - i;
            if j < y.lo() || j > y.hi() {
                continue;
            }
            let (_, pairs) = x.module(i, u).tensor(y.module(j, u));
            let len = pairs.len();
            blocks.push((i, j, off, pairs));
            off += len;
        }
        Blocks { blocks }
    }

    fn find(&self, i: i64) -> Option<&(i64, i64, usize, Vec<(usize, usize)>)> {
        self.blocks.iter().find(|b| b.0 == i)
    }

    fn len(&self) -> usize {
        self.blocks.last().map_or(0, |b| b.2 + b.3.len())
    }
}

fn total_range(x: &PComplex, y: &PComplex) -> Option<(i64, i64)> {
    if x.is_empty() || y.is_empty() {
        None
    } else {
        Some((x.lo() + y.lo(), x.hi() + y.hi()))
    }
}

fn total_term(x: &PComplex, y: &PComplex, n: i64) -> Result<Presheaf> {
    let mut parts = Vec::new();
    for i in x.lo()..=x.hi() {
        let j = n - i;
        if j >= y.lo() && j <= y.hi() {
            parts.push(tensor(x.term(i), y.term(j))?);
        }
    }
    if parts.is_empty() {
        return Ok(Presheaf::zero(x.space_arc().clone(), *x.ring()));
    }
    Ok(direct_sum(&parts.iter().collect::<Vec<_>>()))
}

/// Total tensor complex with `d(x ⊗ y) = dx ⊗ y + (-1)^{|x|} x ⊗ dy`.
pub fn tensor_total(x: &PComplex, y: &PComplex) -> Result<PComplex> {
    x.check_compatible(y)?;
    let ring = *x.ring();
    let Some((lo, hi)) = total_range(x, y) else {
        return Ok(PComplex::zero(x.space_arc().clone(), ring));
    };
    let terms = (lo..=hi).map(|n| total_term(x, y, n)).collect::<Result<Vec<_>>>()?;
    let id = |k: usize| Mat::identity(k, &ring);
    let diffs = (lo + 1..=hi)
        .map(|n| {
            (0..x.space().nopens())
                .map(|u| {
                    let src = Blocks::new(x, y, n, u);
                    let dst = Blocks::new(x, y, n - 1, u);
                    let mut m = Mat::zeros(dst.len(), src.len());
                    for (i, j, off, pairs) in &src.blocks {
                        if let Some((_, _, doff, dpairs)) = dst.find(i - 1) {
                            let gy = y.module(*j, u).ngens();
                            let b = kron_pairs(&x.d(*i, u), &id(gy), pairs, dpairs, &ring);
                            m.paste(*doff, *off, &b);
                        }
                        if let Some((_, _, doff, dpairs)) = dst.find(*i) {
                            let gx = x.module(*i, u).ngens();
                            let s = ring.from_i64(sign(*i));
                            let b = kron_pairs(&id(gx), &y.d(*j, u), pairs, dpairs, &ring).scale(&s, &ring);
                            m.paste(*doff, *off, &b);
                        }
                    }
                    m
                })
                .collect()
        })
        .collect();
    Ok(PComplex::from_parts(x.space_arc().clone(), ring, lo, terms, diffs))
}

/// `f ⊗ g : X ⊗ X' → Y ⊗ Y'` for degree-zero chain maps.
pub fn tensor_maps(f: &ChainMap, g: &ChainMap) -> Result<ChainMap> {
    let src = tensor_total(&f.source, &g.source)?;
    let dst = tensor_total(&f.target, &g.target)?;
    let ring = *src.ring();
    Ok(ChainMap::from_fn(&src, &dst, |n, u| {
        let sb = Blocks::new(&f.source, &g.source, n, u);
        let db = Blocks::new(&f.target, &g.target, n, u);
        let mut m = Mat::zeros(db.len(), sb.len());
        for (i, j, off, pairs) in &sb.blocks {
            if let Some((_, _, doff, dpairs)) = db.find(*i) {
                let b = kron_pairs(&f.component(*i, u), &g.component(*j, u), pairs, dpairs, &ring);
                m.paste(*doff, *off, &b);
            }
        }
        m
    }))
}

/// `X ⊗ R[0] → X`.
pub fn tensor_unit_map(x: &PComplex) -> ChainMap {
    let ring = *x.ring();
    let unit = PComplex::concentrated(&Presheaf::constant(x.space_arc().clone(), &Module::free(&ring, 1)), 0);
    let t = tensor_total(x, &unit).expect("same space and ring");
    ChainMap::from_fn(&t, x, |n, u| Mat::identity(x.module(n, u).ngens(), &ring))
}

/// A finite abstract simplicial complex on ordered vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialComplex {
    /// Simplices grouped by dimension, each sorted, each list sorted.
    pub simplices: Vec<Vec<Vec<usize>>>,
}

impl SimplicialComplex {
    /// The complex generated by the given faces.
    pub fn from_facets(facets: &[Vec<usize>]) -> Result<SimplicialComplex> {
        let mut all: BTreeSet<Vec<usize>> = BTreeSet::new();
        for f in facets {
            let mut f = f.clone();
            f.sort_unstable();
            f.dedup();
            if f.is_empty() {
                continue;
            }
            if f.len() > 20 {
                return Err(Error::Precondition("simplex dimension too large".into()));
            }
            for mask in 1u32..(1 << f.len()) {
                all.insert((0..f.len()).filter(|&i| mask >> i & 1 == 1).map(|i| f[i]).collect());
            }
        }
        if all.is_empty() {
            return Err(Error::Precondition("simplicial complex must be nonempty".into()));
        }
        let dim = all.iter().map(Vec::len).max().unwrap() - 1;
        let mut simplices = vec![Vec::new(); dim + 1];
        for s in all {
            simplices[s.len() - 1].push(s);
        }
        Ok(SimplicialComplex { simplices })
    }

    pub fn point() -> SimplicialComplex {
        SimplicialComplex::from_facets(&[vec![0]]).expect("nonempty")
    }

    pub fn simplex(n: usize) -> SimplicialComplex {
        SimplicialComplex::from_facets(&[(0..=n).collect()]).expect("nonempty")
    }

    /// The boundary of the `n`-simplex, a sphere of dimension `n - 1`.
    pub fn simplex_boundary(n: usize) -> SimplicialComplex {
        let facets: Vec<Vec<usize>> = (0..=n).map(|skip| (0..=n).filter(|&v| v != skip).collect()).collect();
        SimplicialComplex::from_facets(&facets).expect("nonempty")
    }

    pub fn dim(&self) -> usize {
        self.simplices.len() - 1
    }

    /// Boundary matrix from dimension `k` to `k - 1` with alternating face signs.
    pub fn boundary(&self, k: usize, ring: &crate::linalg::Ring) -> Mat {
        let src = &self.simplices[k];
        let dst = &self.simplices[k - 1];
        let mut m = Mat::zeros(dst.len(), src.len());
        for (c, s) in src.iter().enumerate() {
            for i in 0..s.len() {
                let face: Vec<usize> = s.iter().enumerate().filter(|&(t, _)| t != i).map(|(_, &v)| v).collect();
                let r = dst.binary_search(&face).expect("faces are present");
                m.set(r, c, ring.from_i64(sign(i as i64)));
            }
        }
        m
    }

    /// Simplicial chains as a constant complex of presheaves.
    pub fn chains(&self, like: &PComplex) -> PComplex {
        let ring = *like.ring();
        let terms: Vec<Presheaf> = self
            .simplices
            .iter()
            .map(|s| Presheaf::constant(like.space_arc().clone(), &Module::free(&ring, s.len())))
            .collect();
        let diffs = (1..=self.dim()).map(|k| vec![self.boundary(k, &ring); like.space().nopens()]).collect();
        PComplex::from_parts(like.space_arc().clone(), ring, 0, terms, diffs)
    }
}

/// `X ⊗ C_*(S)`.
pub fn simplicial_tensor(x: &PComplex, s: &SimplicialComplex) -> Result<PComplex> {
    tensor_total(x, &s.chains(x))
}

/// Levelwise sheafification `L²X` with its unit `X → L²X`.
pub fn sheafify_complex(x: &PComplex) -> (PComplex, ChainMap) {
    let nop = x.space().nopens();
    let units: Vec<(Presheaf, crate::presheaf::PresheafHom)> =
        (x.lo()..=x.hi()).map(|n| crate::presheaf::sheafify(x.term(n))).collect();
    let terms: Vec<Presheaf> = units.iter().map(|(p, _)| p.clone()).collect();
    let diffs = (x.lo() + 1..=x.hi())
        .map(|n| {
            let ld = crate::presheaf::sheafify_hom(&x.d_hom(n));
            (0..nop).map(|u| ld.component(u).clone()).collect()
        })
        .collect();
    let lx = PComplex::from_parts(x.space_arc().clone(), *x.ring(), x.lo(), terms, diffs);
    let eta = ChainMap::from_fn(x, &lx, |n, u| units[(n - x.lo()) as usize].1.component(u).clone());
    (lx, eta)
}
