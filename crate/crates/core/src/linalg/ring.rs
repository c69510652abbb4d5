use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Ring element. Integers and residues are stored with denominator one.
pub type Elem = BigRational;

/// Coefficient ring of every module in the library.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Ring {
    Integers,
    Rationals,
    PrimeField(u64),
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl Ring {
    pub fn prime_field(p: u64) -> Result<Ring> {
        if is_prime(p) {
            Ok(Ring::PrimeField(p))
        } else {
            Err(Error::Precondition(format!("{p} is not prime")))
        }
    }

    /// Parses `Z`, `Q` or `Fp:<p>`.
    pub fn parse(s: &str) -> Result<Ring> {
        match s.trim() {
            "Z" | "ZZ" | "integers" => Ok(Ring::Integers),
            "Q" | "QQ" | "rationals" => Ok(Ring::Rationals),
            other => {
                let p = other
                    .strip_prefix("Fp:")
                    .or_else(|| other.strip_prefix("F"))
                    .and_then(|t| t.parse::<u64>().ok())
                    .ok_or_else(|| Error::Parse(format!("unknown ring `{other}`")))?;
                Ring::prime_field(p).map_err(|_| Error::Parse(format!("{p} is not prime")))
            }
        }
    }

    pub fn is_field(&self) -> bool {
        !matches!(self, Ring::Integers)
    }

    pub fn zero(&self) -> Elem {
        Elem::zero()
    }

    pub fn one(&self) -> Elem {
        Elem::one()
    }

    pub fn from_i64(&self, v: i64) -> Elem {
        self.normalize(Elem::from_integer(BigInt::from(v)))
    }

    pub fn from_int(&self, v: BigInt) -> Elem {
        self.normalize(Elem::from_integer(v))
    }

    /// Canonical representative: residues in `[0, p)`; rationals reduced.
    pub fn normalize(&self, x: Elem) -> Elem {
        match self {
            Ring::Integers | Ring::Rationals => x,
            Ring::PrimeField(p) => {
                let p = BigInt::from(*p);
                let num = x.numer().mod_floor(&p);
                if x.denom().is_one() {
                    Elem::from_integer(num)
                } else {
                    let inv = mod_inverse(&x.denom().mod_floor(&p), &p);
                    Elem::from_integer((num * inv).mod_floor(&p))
                }
            }
        }
    }

    pub fn add(&self, a: &Elem, b: &Elem) -> Elem {
        match self {
            Ring::Integers => Elem::from_integer(a.numer() + b.numer()),
            Ring::Rationals => a + b,
            Ring::PrimeField(p) => Elem::from_integer((a.numer() + b.numer()).mod_floor(&BigInt::from(*p))),
        }
    }

    pub fn sub(&self, a: &Elem, b: &Elem) -> Elem {
        match self {
            Ring::Integers => Elem::from_integer(a.numer() - b.numer()),
            Ring::Rationals => a - b,
            Ring::PrimeField(p) => Elem::from_integer((a.numer() - b.numer()).mod_floor(&BigInt::from(*p))),
        }
    }

    pub fn neg(&self, a: &Elem) -> Elem {
        self.sub(&Elem::zero(), a)
    }

    pub fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        match self {
            Ring::Integers => Elem::from_integer(a.numer() * b.numer()),
            Ring::Rationals => a * b,
            Ring::PrimeField(p) => Elem::from_integer((a.numer() * b.numer()).mod_floor(&BigInt::from(*p))),
        }
    }

    pub fn is_unit(&self, a: &Elem) -> bool {
        match self {
            Ring::Integers => a.numer().abs().is_one(),
            _ => !a.is_zero(),
        }
    }

    /// Euclidean size used for pivot selection; zero only for zero.
    pub fn norm(&self, a: &Elem) -> BigInt {
        match self {
            Ring::Integers => a.numer().abs(),
            _ => {
                if a.is_zero() {
                    BigInt::zero()
                } else {
                    BigInt::one()
                }
            }
        }
    }

    /// Euclidean division `a = q b + r` with `norm(r) < norm(b)`.
    pub fn div_rem(&self, a: &Elem, b: &Elem) -> (Elem, Elem) {
        assert!(!b.is_zero(), "division by zero");
        match self {
            Ring::Integers => {
                let (q, r) = a.numer().div_mod_floor(b.numer());
                (Elem::from_integer(q), Elem::from_integer(r))
            }
            _ => (self.mul(a, &self.inv(b)), Elem::zero()),
        }
    }

    /// Inverse of a unit.
    pub fn inv(&self, a: &Elem) -> Elem {
        match self {
            Ring::Integers => {
                assert!(self.is_unit(a), "not a unit");
                a.clone()
            }
            Ring::Rationals => a.recip(),
            Ring::PrimeField(p) => {
                let p = BigInt::from(*p);
                Elem::from_integer(mod_inverse(&a.numer().mod_floor(&p), &p))
            }
        }
    }

    /// Exact quotient `a / b` if `b` divides `a`.
    pub fn divide(&self, a: &Elem, b: &Elem) -> Option<Elem> {
        if b.is_zero() {
            return if a.is_zero() { Some(Elem::zero()) } else { None };
        }
        let (q, r) = self.div_rem(a, b);
        r.is_zero().then_some(q)
    }

    pub fn divides(&self, b: &Elem, a: &Elem) -> bool {
        self.divide(a, b).is_some()
    }

    /// Associate representative: non-negative over the integers, `0` or `1` over fields.
    pub fn associate(&self, a: &Elem) -> Elem {
        match self {
            Ring::Integers => Elem::from_integer(a.numer().abs()),
            _ => {
                if a.is_zero() {
                    Elem::zero()
                } else {
                    Elem::one()
                }
            }
        }
    }

    /// Unit `u` with `u * a = associate(a)`.
    pub fn unit_normalizer(&self, a: &Elem) -> Elem {
        match self {
            Ring::Integers => {
                if a.is_negative() {
                    -Elem::one()
                } else {
                    Elem::one()
                }
            }
            _ => {
                if a.is_zero() {
                    Elem::one()
                } else {
                    self.inv(a)
                }
            }
        }
    }

    pub fn gcd(&self, a: &Elem, b: &Elem) -> Elem {
        match self {
            Ring::Integers => Elem::from_integer(a.numer().gcd(b.numer())),
            _ => {
                if a.is_zero() && b.is_zero() {
                    Elem::zero()
                } else {
                    Elem::one()
                }
            }
        }
    }

    /// Canonical representative of `x` modulo the ideal `(order)`.
    pub fn reduce_mod(&self, x: &Elem, order: &Elem) -> Elem {
        if order.is_zero() {
            return x.clone();
        }
        match self {
            Ring::Integers => Elem::from_integer(x.numer().mod_floor(&order.numer().abs())),
            _ => Elem::zero(),
        }
    }
}

fn mod_inverse(a: &BigInt, p: &BigInt) -> BigInt {
    let e = a.extended_gcd(p);
    assert!(e.gcd.is_one(), "element not invertible mod p");
    e.x.mod_floor(p)
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ring::Integers => write!(f, "Z"),
            Ring::Rationals => write!(f, "Q"),
            Ring::PrimeField(p) => write!(f, "Fp:{p}"),
        }
    }
}

/// Renders an element as an integer when possible.
pub fn elem_to_string(x: &Elem) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn elem_to_i64(x: &Elem) -> Option<i64> {
    if x.denom().is_one() {
        x.numer().to_i64()
    } else {
        None
    }
}
