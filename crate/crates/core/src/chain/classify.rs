use serde::Serialize;

use crate::presheaf::sheafify_hom;

use super::homology::homology_map;
use super::ChainMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum IsoLevel {
    Presheaf,
    Sheaf,
    Stalk,
}

/// Where a homology map fails to be an isomorphism.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub level: IsoLevel,
    pub degree: i64,
    /// An open (presheaf and sheaf levels) or a point (stalk level).
    pub location: String,
    pub injective: bool,
    pub surjective: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeakEqReport {
    pub presheaf_iso: bool,
    pub sheaf_iso: bool,
    pub stalkwise_iso: bool,
    pub witnesses: Vec<Witness>,
}

/// Decides whether `H_*(f)` is an isomorphism of presheaves, of sheaves after
/// sheafification, and on every stalk.
pub fn classify(f: &ChainMap) -> WeakEqReport {
    let space = f.source.space();
    let (lo, hi) = f.degree_range();
    let mut witnesses = Vec::new();
    for n in lo..=hi {
        let h = homology_map(f, n);
        for u in 0..space.nopens() {
            let m = h.component_hom(u);
            let (i, s) = (m.is_injective(), m.is_surjective());
            if !(i && s) {
                witnesses.push(Witness {
                    level: IsoLevel::Presheaf,
                    degree: n,
                    location: space.format_set(space.open(u)),
                    injective: i,
                    surjective: s,
                });
            }
        }
        let lh = sheafify_hom(&h);
        for u in 0..space.nopens() {
            let m = lh.component_hom(u);
            let (i, s) = (m.is_injective(), m.is_surjective());
            if !(i && s) {
                witnesses.push(Witness {
                    level: IsoLevel::Sheaf,
                    degree: n,
                    location: space.format_set(space.open(u)),
                    injective: i,
                    surjective: s,
                });
            }
        }
        for p in 0..space.npoints() {
            let m = lh.component_hom(space.min_open_id(p));
            let (i, s) = (m.is_injective(), m.is_surjective());
            if !(i && s) {
                witnesses.push(Witness {
                    level: IsoLevel::Stalk,
                    degree: n,
                    location: space.point_names()[p].clone(),
                    injective: i,
                    surjective: s,
                });
            }
        }
    }
    let ok = |l: IsoLevel| !witnesses.iter().any(|w| w.level == l);
    WeakEqReport {
        presheaf_iso: ok(IsoLevel::Presheaf),
        sheaf_iso: ok(IsoLevel::Sheaf),
        stalkwise_iso: ok(IsoLevel::Stalk),
        witnesses,
    }
}

/// `H_n(f)` is an isomorphism at every open and degree.
pub fn is_presheaf_quasi_iso(f: &ChainMap) -> bool {
    let (lo, hi) = f.degree_range();
    (lo..=hi).all(|n| homology_map(f, n).is_iso())
}

/// `H_n(f)` is an isomorphism on every stalk (evaluated at minimal opens).
pub fn is_stalkwise_quasi_iso(f: &ChainMap) -> bool {
    let space = f.source.space();
    let (lo, hi) = f.degree_range();
    (lo..=hi).all(|n| {
        let h = homology_map(f, n);
        (0..space.npoints()).all(|p| h.component_hom(space.min_open_id(p)).is_iso())
    })
}
