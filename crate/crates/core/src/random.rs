//! Seeded random presheaves, complexes and chain maps for property checks.

use std::sync::Arc;

use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::chain::{chain_maps, direct_sum_complex, disk, ChainMap, PComplex};
use crate::linalg::module::preimage_lattice;
use crate::linalg::{Elem, Mat, Module, Ring};
use crate::presheaf::{cyclic_hom, Cell, Presheaf, PresheafHom};
use crate::site::{FinSpace, OpenId};

pub type Rand = ChaCha8Rng;

pub fn rng(seed: u64) -> Rand {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Size limits for random complexes.
#[derive(Clone, Copy, Debug)]
pub struct Params {
    /// Maximum number of cells in one term.
    pub max_rank: usize,
    /// Maximum number of nonzero degrees.
    pub max_len: usize,
    /// Lowest degree.
    pub lo: i64,
    /// Allow torsion cells over ℤ.
    pub torsion: bool,
}

impl Default for Params {
    fn default() -> Params {
        Params { max_rank: 3, max_len: 3, lo: 0, torsion: true }
    }
}

pub fn random_scalar(ring: &Ring, rng: &mut Rand) -> Elem {
    match ring {
        Ring::PrimeField(p) => ring.from_i64(rng.gen_range(0..*p as i64)),
        _ => ring.from_i64(rng.gen_range(-2..=2)),
    }
}

fn random_order(ring: &Ring, rng: &mut Rand, torsion: bool) -> Elem {
    if *ring == Ring::Integers && torsion && rng.gen_bool(0.3) {
        ring.from_i64(*[2, 3, 4, 6].choose(rng).expect("nonempty"))
    } else {
        Elem::zero()
    }
}

/// A random `⊕ R_{C_i}/(a_i)` with exactly `rank` cells.
pub fn random_cyclic_sum(space: &Arc<FinSpace>, ring: Ring, rng: &mut Rand, rank: usize, torsion: bool) -> Presheaf {
    let cells = (0..rank)
        .map(|_| Cell { open: rng.gen_range(0..space.nopens()), order: random_order(&ring, rng, torsion) })
        .collect();
    Presheaf::cyclic_sum(space.clone(), ring, cells)
}

/// A random element of `{x ∈ M : a x = 0}`.
pub fn random_torsion_element(m: &Module, a: &Elem, rng: &mut Rand) -> Vec<Elem> {
    let ring = *m.ring();
    let n = m.ngens();
    let lattice = preimage_lattice(&ring, &Mat::identity(n, &ring).scale(a, &ring), m);
    let mut v = vec![ring.zero(); n];
    for c in lattice.columns() {
        let s = random_scalar(&ring, rng);
        for (x, y) in v.iter_mut().zip(&c) {
            *x = ring.add(x, &ring.mul(&s, y));
        }
    }
    m.reduce(&v)
}

/// A random map out of a cyclic sum.
pub fn random_hom(source: &Presheaf, target: &Presheaf, rng: &mut Rand) -> PresheafHom {
    let cells = source.cells().expect("source is a cyclic sum");
    let elems: Vec<Vec<Elem>> =
        cells.iter().map(|c| random_torsion_element(target.value(c.open), &c.order, rng)).collect();
    cyclic_hom(source, target, &elems).expect("elements are killed by the cell orders")
}

/// A random complex of cyclic sums. Each differential is a random map into
/// the kernel of the one below it.
pub fn random_complex(space: &Arc<FinSpace>, ring: Ring, rng: &mut Rand, p: Params) -> PComplex {
    let len = rng.gen_range(1..=p.max_len.max(1));
    let terms: Vec<Presheaf> = (0..len)
        .map(|_| {
            let rank = rng.gen_range(0..=p.max_rank);
            random_cyclic_sum(space, ring, rng, rank, p.torsion)
        })
        .collect();
    let nop = space.nopens();
    let mut diffs: Vec<Vec<Mat>> = Vec::new();
    for k in 1..len {
        let (kernel, incl) = if k == 1 {
            let t = &terms[0];
            (t.clone(), PresheafHom::identity(t))
        } else {
            let below = PresheafHom::new_unchecked(terms[k - 1].clone(), terms[k - 2].clone(), diffs[k - 2].clone());
            below.kernel()
        };
        let h = incl.compose(&random_hom(&terms[k], &kernel, rng));
        diffs.push((0..nop).map(|u| h.component(u).clone()).collect());
    }
    PComplex::new(space.clone(), ring, p.lo, terms, diffs).expect("random complex is valid")
}

/// A random combination of generators of the chain maps `x → y`.
pub fn random_chain_map(x: &PComplex, y: &PComplex, rng: &mut Rand) -> ChainMap {
    let ring = *x.ring();
    let (_, gens) = chain_maps(x, y);
    let mut f = ChainMap::zero(x, y);
    for g in gens {
        f = f.add(&g.scale(&random_scalar(&ring, rng)));
    }
    f
}

/// A sum of disks on random free cells with bottoms in `[lo, lo + len - 2]`.
pub fn random_acyclic(
    space: &Arc<FinSpace>,
    ring: Ring,
    rng: &mut Rand,
    count: usize,
    lo: i64,
    len: usize,
) -> PComplex {
    let parts: Vec<PComplex> = (0..count)
        .map(|_| {
            let c = space.open(rng.gen_range(0..space.nopens()));
            let n = lo + rng.gen_range(0..len.saturating_sub(1).max(1)) as i64;
            disk(space, ring, c, n).expect("nonempty open")
        })
        .collect();
    if parts.is_empty() {
        return PComplex::zero(space.clone(), ring);
    }
    direct_sum_complex(&parts.iter().collect::<Vec<_>>())
}

/// Shape of a random map produced by [`random_map`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MapKind {
    /// A random chain map between random complexes.
    Generic,
    /// `(id, g) : Y ⊕ K → Y` with `K` random.
    Surjective,
    /// `(id, g) : Y ⊕ K → Y` with `K` a sum of disks.
    AcyclicFibration,
}

/// A random map of the given shape.
pub fn random_map(space: &Arc<FinSpace>, ring: Ring, rng: &mut Rand, p: Params, kind: MapKind) -> ChainMap {
    match kind {
        MapKind::Generic => {
            let x = random_complex(space, ring, rng, p);
            let y = random_complex(space, ring, rng, p);
            random_chain_map(&x, &y, rng)
        }
        MapKind::Surjective | MapKind::AcyclicFibration => {
            let small = Params { max_rank: p.max_rank.div_ceil(2), ..p };
            let y = random_complex(space, ring, rng, small);
            let k = if kind == MapKind::Surjective {
                random_complex(space, ring, rng, small)
            } else {
                let count = rng.gen_range(0..=small.max_rank);
                random_acyclic(space, ring, rng, count, p.lo, p.max_len)
            };
            let g = random_chain_map(&k, &y, rng);
            let (_, _, proj) = crate::chain::direct_sum_maps(&[&y, &k]);
            proj[0].add(&g.compose(&proj[1]))
        }
    }
}

/// A uniformly chosen open.
pub fn random_open(space: &FinSpace, rng: &mut Rand) -> OpenId {
    rng.gen_range(0..space.nopens())
}
