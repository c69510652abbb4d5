//! t-structures given by a function `d` from points to extended integers.

mod refined;
mod truncate;

use std::sync::Arc;

use crate::chain::{hofib, homology_map_at, homology_sq, ChainMap, PComplex};
use crate::error::{Error, Result};
use crate::site::{
    admissibility_witness, d_is_admissible, d_is_truncatable, truncatability_witness, DFunction, ExtInt, FinSpace,
    Stratification,
};

pub use refined::{in_d_geq0_refined, relevant_primes, RefinedDFunction, RefinedMode};
pub use truncate::{factor_t, heart_project, truncate, TFactorization, TruncationTriangle};

/// `D_{≥0} = {X : H_m(X)_p = 0 for m < d(p)}` and `D_{≤0} = {X : H_m(X)_p = 0 for m > d(p)}`.
#[derive(Clone, Debug)]
pub struct TStructure {
    pub space: Arc<FinSpace>,
    pub d: DFunction,
    /// Every `d⁻¹([n, ∞])` is open.
    pub admissible: bool,
    /// Every `d⁻¹([n, ∞])` is closed; levelwise truncation is available.
    pub truncatable: bool,
}

impl TStructure {
    pub fn new(space: Arc<FinSpace>, d: DFunction) -> Result<TStructure> {
        d.check(&space)?;
        let admissible = d_is_admissible(&space, &d);
        let truncatable = d_is_truncatable(&space, &d);
        Ok(TStructure { space, d, admissible, truncatable })
    }

    pub fn constant(space: Arc<FinSpace>, v: ExtInt) -> TStructure {
        let d = DFunction::constant(&space, v);
        TStructure::new(space, d).expect("constant function has the right length")
    }

    /// The t-structure of a perversity: `d(q) = p(a)` for `q` in stratum `a`.
    pub fn perverse(space: Arc<FinSpace>, strat: &Stratification) -> TStructure {
        let d = crate::site::d_from_perversity(&space, strat);
        TStructure::new(space, d).expect("one value per point")
    }

    /// `t` shifted so that its `D_{≥0}` is the old `D_{≥k}`.
    pub fn shifted(&self, k: i64) -> TStructure {
        TStructure::new(self.space.clone(), self.d.shifted(k)).expect("same length")
    }

    pub(crate) fn require_truncatable(&self) -> Result<()> {
        if let Some((n, set)) = truncatability_witness(&self.space, &self.d) {
            let open_note = match admissibility_witness(&self.space, &self.d) {
                None => "; the open-preimage condition holds, but it does not give a levelwise truncation",
                Some(_) => "",
            };
            return Err(Error::Precondition(format!(
                "d⁻¹([{n}, ∞]) = {} is not closed{open_note}",
                self.space.format_set(set)
            )));
        }
        Ok(())
    }
}

fn stalk_homology_vanishes(x: &PComplex, p: usize, m: i64) -> bool {
    homology_sq(x, m, x.space().min_open_id(p)).module.is_zero()
}

/// `H_m(X)_p = 0` for all `m < d(p) + k`.
pub(crate) fn in_geq(x: &PComplex, d: &DFunction, k: i64) -> bool {
    (0..x.space().npoints()).all(|p| {
        let cut = d.at(p).offset(k);
        (x.lo()..=x.hi()).filter(|&m| ExtInt::Fin(m) < cut).all(|m| stalk_homology_vanishes(x, p, m))
    })
}

/// `H_m(X)_p = 0` for all `m > d(p) + k`.
pub(crate) fn in_leq(x: &PComplex, d: &DFunction, k: i64) -> bool {
    (0..x.space().npoints()).all(|p| {
        let cut = d.at(p).offset(k);
        (x.lo()..=x.hi()).filter(|&m| ExtInt::Fin(m) > cut).all(|m| stalk_homology_vanishes(x, p, m))
    })
}

pub fn in_d_geq0(x: &PComplex, t: &TStructure) -> bool {
    in_geq(x, &t.d, 0)
}

pub fn in_d_leq0(x: &PComplex, t: &TStructure) -> bool {
    in_leq(x, &t.d, 0)
}

/// `X ∈ D_{≤ -1}`.
pub fn in_d_leq_minus1(x: &PComplex, t: &TStructure) -> bool {
    in_leq(x, &t.d, -1)
}

/// `H_m(f)_p` is an isomorphism for `m < d(p) + n` and onto for `m = d(p) + n` when `d(p)` is finite.
pub fn is_n_equivalence(f: &ChainMap, t: &TStructure, n: i64) -> bool {
    let space = f.source.space();
    let (lo, hi) = f.degree_range();
    (0..space.npoints()).all(|p| {
        let u = space.min_open_id(p);
        let cut = t.d.at(p).offset(n);
        (lo..=hi).all(|m| {
            let e = ExtInt::Fin(m);
            if e < cut {
                homology_map_at(f, m, u).is_iso()
            } else if e == cut {
                homology_map_at(f, m, u).is_surjective()
            } else {
                true
            }
        })
    })
}

/// `hofib(f) ∈ D_{≤ n-1}`.
pub fn is_co_n_equivalence(f: &ChainMap, t: &TStructure, n: i64) -> bool {
    in_leq(&hofib(f), &t.d, n - 1)
}

/// `hofib(f) ∈ D_{≥ n}`, which agrees with [`is_n_equivalence`].
pub fn hofib_in_d_geq(f: &ChainMap, t: &TStructure, n: i64) -> bool {
    in_geq(&hofib(f), &t.d, n)
}

/// Membership in `D_{≥0}` for a perverse t-structure, checked stratum by
/// stratum: `H_m(X)_q = 0` for `m < p(a)` and `q ∈ S_a`.
pub fn perverse_geq0_direct(x: &PComplex, strat: &Stratification) -> bool {
    strat.strata.iter().zip(&strat.perversity).all(|(s, &pa)| {
        s.points().all(|q| {
            (x.lo()..pa.min(x.hi() + 1)).all(|m| crate::presheaf::stalk(&crate::chain::homology(x, m), q).is_zero())
        })
    })
}

/// The same for `D_{≤0}`: `H_m(X)_q = 0` for `m > p(a)` and `q ∈ S_a`.
pub fn perverse_leq0_direct(x: &PComplex, strat: &Stratification) -> bool {
    strat.strata.iter().zip(&strat.perversity).all(|(s, &pa)| {
        s.points().all(|q| {
            ((pa + 1).max(x.lo())..=x.hi()).all(|m| crate::presheaf::stalk(&crate::chain::homology(x, m), q).is_zero())
        })
    })
}

/// A set `I′` of generators `i_{C,m}`, downward closed in `m` for each open.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IPrime {
    /// Per open, the largest `m` with `i_{C,m} ∈ I′`; `NegInf` when there is none.
    pub tops: Vec<ExtInt>,
}

impl IPrime {
    /// Listed degrees for each open must form an interval; the set is read as
    /// also containing every lower degree.
    pub fn from_pairs(space: &FinSpace, pairs: &[(usize, i64)]) -> Result<IPrime> {
        let mut tops = vec![ExtInt::NegInf; space.nopens()];
        for c in 0..space.nopens() {
            let mut ms: Vec<i64> = pairs.iter().filter(|(o, _)| *o == c).map(|(_, m)| *m).collect();
            ms.sort_unstable();
            ms.dedup();
            if ms.windows(2).any(|w| w[1] != w[0] + 1) {
                return Err(Error::Precondition(format!(
                    "generators at {} are not downward closed in degree",
                    space.format_set(space.open(c))
                )));
            }
            if let Some(&m) = ms.last() {
                tops[c] = ExtInt::Fin(m);
            }
        }
        if let Some((o, _)) = pairs.iter().find(|(o, _)| *o >= space.nopens()) {
            return Err(Error::Invalid(format!("open index {o} out of range")));
        }
        Ok(IPrime { tops })
    }
}

/// `f ∈ W(I′)`: `H_{m-1}(f)(C)` is an isomorphism and `H_m(f)(C)` is onto whenever `i_{C,m} ∈ I′`.
pub fn w_iprime_classify(f: &ChainMap, iprime: &IPrime) -> bool {
    let (lo, hi) = f.degree_range();
    (0..f.source.space().nopens()).all(|c| {
        let top = match iprime.tops[c] {
            ExtInt::NegInf => return true,
            ExtInt::Fin(m) => m.min(hi + 1),
            ExtInt::PosInf => hi + 1,
        };
        (lo..=top).all(|m| homology_map_at(f, m - 1, c).is_iso() && homology_map_at(f, m, c).is_surjective())
    })
}

#[cfg(test)]
mod tests;
