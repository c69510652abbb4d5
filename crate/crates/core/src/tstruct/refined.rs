use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::chain::{homology_sq, PComplex};
use crate::error::{Error, Result};
use crate::linalg::local::torsion_primes;
use crate::linalg::{localize_at_prime, tensor_residue, Module, PrimeIdeal, Ring};
use crate::site::{DFunction, ExtInt, FinSpace};

/// `d(p, 𝔭)` on points of spec `R_p = spec ℤ`, given on finitely many primes
/// with a fallback per point for all other primes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RefinedDFunction {
    /// Declared primes; `0` is the generic point.
    pub primes: Vec<u64>,
    /// `table[p][i]` is the value at point `p` and `primes[i]`.
    pub table: Vec<Vec<ExtInt>>,
    pub fallback: Vec<ExtInt>,
}

impl RefinedDFunction {
    pub fn new(space: &FinSpace, primes: Vec<u64>, table: Vec<Vec<ExtInt>>, fallback: Vec<ExtInt>) -> Result<Self> {
        for &q in &primes {
            PrimeIdeal::new(q)?;
        }
        if table.len() != space.npoints() || fallback.len() != space.npoints() {
            return Err(Error::Invalid("refined d-function needs one row per point".into()));
        }
        if table.iter().any(|r| r.len() != primes.len()) {
            return Err(Error::Invalid("refined d-function row length differs from the prime list".into()));
        }
        Ok(RefinedDFunction { primes, table, fallback })
    }

    /// `d(p, 𝔭) = d(p)` for every prime.
    pub fn constant_on_fibers(d: &DFunction) -> Self {
        RefinedDFunction {
            primes: Vec::new(),
            table: vec![Vec::new(); d.values().len()],
            fallback: d.values().to_vec(),
        }
    }

    pub fn at(&self, p: usize, prime: u64) -> ExtInt {
        match self.primes.iter().position(|&q| q == prime) {
            Some(i) => self.table[p][i],
            None => self.fallback[p],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RefinedMode {
    /// `(H_m(X)_p)_𝔭 = 0`.
    Localize,
    /// `(H_m(X)_p)_𝔭 ⊗ k(𝔭) = 0`.
    Residue,
}

fn vanishes(m: &Module, prime: u64, mode: RefinedMode) -> Result<bool> {
    Ok(match mode {
        RefinedMode::Localize => localize_at_prime(m, prime)?.is_zero(),
        RefinedMode::Residue => tensor_residue(m, prime)?.is_zero(),
    })
}

/// Primes at which some stalk homology of `x` has torsion.
pub fn relevant_primes(x: &PComplex) -> Vec<u64> {
    let space = x.space();
    let mut out = BTreeSet::new();
    for p in 0..space.npoints() {
        for m in x.lo()..=x.hi() {
            out.extend(torsion_primes(&homology_sq(x, m, space.min_open_id(p)).module));
        }
    }
    out.into_iter().collect()
}

/// `X ∈ D_{≥0}` for the refined t-structure: the localized (or residue)
/// stalk homology vanishes below `d(p, 𝔭)` at every point and prime.
///
/// Only declared primes, primes dividing a torsion coefficient, and the
/// generic point can behave differently; an undeclared prime that divides no
/// torsion coefficient sees only the free rank, which the generic point with
/// the fallback cutoff also checks.
pub fn in_d_geq0_refined(x: &PComplex, rd: &RefinedDFunction, mode: RefinedMode) -> Result<bool> {
    if *x.ring() != Ring::Integers {
        return Err(Error::RingMismatch("refined t-structures need the integers".into()));
    }
    let space = x.space();
    for p in 0..space.npoints() {
        for m in x.lo()..=x.hi() {
            let h = homology_sq(x, m, space.min_open_id(p)).module;
            if h.is_zero() {
                continue;
            }
            let mut primes: BTreeSet<u64> = rd.primes.iter().copied().collect();
            primes.extend(torsion_primes(&h));
            for q in primes {
                if ExtInt::Fin(m) < rd.at(p, q) && !vanishes(&h, q, mode)? {
                    return Ok(false);
                }
            }
            if ExtInt::Fin(m) < rd.fallback[p] && h.free_rank() > 0 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
