use crate::linalg::module::preimage_lattice;
use crate::linalg::{Elem, Subquotient};
use crate::presheaf::{Presheaf, PresheafHom};
use crate::site::OpenId;

use super::{ChainMap, PComplex};

/// `H_n` at one open as cycles modulo boundaries inside `X_n(U)`.
pub(crate) fn homology_sq(x: &PComplex, n: i64, u: OpenId) -> Subquotient {
    let ring = *x.ring();
    let m = x.module(n, u);
    let z = preimage_lattice(&ring, &x.d(n, u), x.module(n - 1, u));
    let b = x.d(n + 1, u).hstack(&m.relation_columns());
    Subquotient::new(&ring, m.ngens(), &z, &b)
}

/// Homology presheaf together with its per-open subquotients.
pub(crate) struct HomologyData {
    pub presheaf: Presheaf,
    pub sqs: Vec<Subquotient>,
}

pub(crate) fn homology_data(x: &PComplex, n: i64) -> HomologyData {
    let ring = *x.ring();
    let nop = x.space().nopens();
    let sqs: Vec<Subquotient> = (0..nop).map(|u| homology_sq(x, n, u)).collect();
    let values = sqs.iter().map(|s| s.module.clone()).collect();
    let term = x.term(n);
    let presheaf = Presheaf::from_fn(x.space_arc().clone(), ring, values, |u, v| {
        let moved = term.res(u, v).mul(&sqs[u].lifts, &ring);
        sqs[v].coords_matrix(&moved).expect("restriction of a cycle is a cycle")
    });
    HomologyData { presheaf, sqs }
}

pub fn homology(x: &PComplex, n: i64) -> Presheaf {
    homology_data(x, n).presheaf
}

/// `H_n(f) : H_n(X) → H_n(Y)`.
pub fn homology_map(f: &ChainMap, n: i64) -> PresheafHom {
    let ring = *f.source.ring();
    let hs = homology_data(&f.source, n);
    let ht = homology_data(&f.target, n);
    let comps = (0..f.source.space().nopens())
        .map(|u| {
            let moved = f.component(n, u).mul(&hs.sqs[u].lifts, &ring);
            ht.sqs[u].coords_matrix(&moved).expect("image of a cycle is a cycle")
        })
        .collect();
    PresheafHom::new_unchecked(hs.presheaf, ht.presheaf, comps)
}

/// All homology vanishes at every open.
pub fn is_acyclic(x: &PComplex) -> bool {
    (x.lo()..=x.hi()).all(|n| (0..x.space().nopens()).all(|u| homology_sq(x, n, u).module.is_zero()))
}

/// Class of a cycle `z ∈ X_n(U)` in `H_n(X)(U)`; `None` when `z` is not a cycle.
pub fn cycle_class(x: &PComplex, n: i64, u: OpenId, z: &[Elem]) -> Option<Vec<Elem>> {
    homology_sq(x, n, u).coords(z)
}

/// `H_n(f)` at one open.
pub(crate) fn homology_map_at(f: &ChainMap, n: i64, u: OpenId) -> crate::linalg::ModHom {
    let ring = *f.source.ring();
    let (s, t) = (homology_sq(&f.source, n, u), homology_sq(&f.target, n, u));
    let moved = f.component(n, u).mul(&s.lifts, &ring);
    let m = t.coords_matrix(&moved).expect("image of a cycle is a cycle");
    crate::linalg::ModHom::new_unchecked(s.module, t.module, m)
}
