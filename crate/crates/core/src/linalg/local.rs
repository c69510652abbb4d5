//! Localization of integer modules at a prime of spec ℤ and residue fields.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use super::module::Module;
use super::ring::{is_prime, Elem, Ring};
use crate::error::{Error, Result};

/// A point of spec ℤ: the generic point `(0)` or a prime `(p)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimeIdeal(u64);

impl PrimeIdeal {
    pub const GENERIC: PrimeIdeal = PrimeIdeal(0);

    pub fn new(p: u64) -> Result<PrimeIdeal> {
        if p == 0 || is_prime(p) {
            Ok(PrimeIdeal(p))
        } else {
            Err(Error::Precondition(format!("{p} is neither 0 nor a prime")))
        }
    }

    pub fn value(&self) -> u64 {
        self.0
    }

    pub fn is_generic(&self) -> bool {
        self.0 == 0
    }

    pub fn residue_field(&self) -> Ring {
        if self.is_generic() {
            Ring::Rationals
        } else {
            Ring::PrimeField(self.0)
        }
    }
}

/// A finitely generated module over ℤ localized at a prime.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalizedModule {
    pub prime: PrimeIdeal,
    pub free_rank: usize,
    pub invariant_factors: Vec<Elem>,
}

impl LocalizedModule {
    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.invariant_factors.is_empty()
    }
}

fn require_integers(m: &Module) -> Result<()> {
    if *m.ring() != Ring::Integers {
        return Err(Error::Precondition(format!("localization needs integer coefficients, got {}", m.ring())));
    }
    Ok(())
}

fn p_part(x: &BigInt, p: u64) -> BigInt {
    let p = BigInt::from(p);
    let mut out = BigInt::from(1);
    let mut x = x.clone();
    while !x.is_zero() && x.is_multiple_of(&p) {
        x /= &p;
        out *= &p;
    }
    out
}

pub fn localize_at_prime(m: &Module, prime: u64) -> Result<LocalizedModule> {
    require_integers(m)?;
    let prime = PrimeIdeal::new(prime)?;
    let (free_rank, factors) = m.invariants();
    let invariant_factors = if prime.is_generic() {
        Vec::new()
    } else {
        factors
            .iter()
            .map(|d| p_part(d.numer(), prime.value()))
            .filter(|q| *q != BigInt::from(1))
            .map(Elem::from_integer)
            .collect()
    };
    Ok(LocalizedModule { prime, free_rank, invariant_factors })
}

/// `M ⊗ k(p)`, a vector space over the residue field.
pub fn tensor_residue(m: &Module, prime: u64) -> Result<Module> {
    require_integers(m)?;
    let prime = PrimeIdeal::new(prime)?;
    let (free_rank, factors) = m.invariants();
    let field = prime.residue_field();
    let dim = if prime.is_generic() {
        free_rank
    } else {
        let p = BigInt::from(prime.value());
        free_rank + factors.iter().filter(|d| d.numer().is_multiple_of(&p)).count()
    };
    Ok(Module::free(&field, dim))
}

/// Primes dividing some invariant factor: the only primes where torsion is visible.
pub fn torsion_primes(m: &Module) -> Vec<u64> {
    let mut out = Vec::new();
    for d in m.invariant_factors() {
        let mut x = d.numer().clone();
        let mut q = BigInt::from(2);
        while &q * &q <= x {
            if x.is_multiple_of(&q) {
                if let Ok(v) = u64::try_from(&q) {
                    out.push(v);
                }
                while x.is_multiple_of(&q) {
                    x /= &q;
                }
            }
            q += 1;
        }
        if x > BigInt::from(1) {
            if let Ok(v) = u64::try_from(&x) {
                out.push(v);
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}
