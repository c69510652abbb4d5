//! Finite T0 spaces, d-functions and stratifications.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

const SOFT_POINT_CAP: usize = 6;
const SOFT_OPEN_CAP: usize = 64;

/// A subset of the points of a space, as a bitmask.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PointSet(pub u64);

impl PointSet {
    pub const EMPTY: PointSet = PointSet(0);

    pub fn singleton(p: usize) -> PointSet {
        PointSet(1 << p)
    }

    pub fn from_points(points: &[usize]) -> PointSet {
        PointSet(points.iter().fold(0, |acc, &p| acc | (1 << p)))
    }

    pub fn full(n: usize) -> PointSet {
        if n == 64 {
            PointSet(u64::MAX)
        } else {
            PointSet((1u64 << n) - 1)
        }
    }

    pub fn contains(self, p: usize) -> bool {
        self.0 >> p & 1 == 1
    }

    pub fn is_subset(self, other: PointSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: PointSet) -> PointSet {
        PointSet(self.0 | other.0)
    }

    pub fn intersect(self, other: PointSet) -> PointSet {
        PointSet(self.0 & other.0)
    }

    pub fn minus(self, other: PointSet) -> PointSet {
        PointSet(self.0 & !other.0)
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn points(self) -> impl Iterator<Item = usize> {
        (0..64).filter(move |&p| self.contains(p))
    }
}

/// Integers extended by `-∞ < ℤ < +∞`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExtInt {
    NegInf,
    Fin(i64),
    PosInf,
}

impl ExtInt {
    pub fn finite(self) -> Option<i64> {
        match self {
            ExtInt::Fin(n) => Some(n),
            _ => None,
        }
    }

    /// Adds a finite offset; infinities absorb it.
    pub fn offset(self, k: i64) -> ExtInt {
        match self {
            ExtInt::Fin(n) => ExtInt::Fin(n + k),
            other => other,
        }
    }

    pub fn parse(s: &str) -> Result<ExtInt> {
        match s.trim() {
            "+inf" | "inf" | "+∞" | "∞" => Ok(ExtInt::PosInf),
            "-inf" | "-∞" => Ok(ExtInt::NegInf),
            t => t.parse::<i64>().map(ExtInt::Fin).map_err(|_| Error::Parse(format!("not an extended integer: {t:?}"))),
        }
    }

    /// Compares against a plain integer.
    pub fn cmp_int(self, k: i64) -> Ordering {
        self.cmp(&ExtInt::Fin(k))
    }
}

impl fmt::Display for ExtInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtInt::NegInf => write!(f, "-inf"),
            ExtInt::Fin(n) => write!(f, "{n}"),
            ExtInt::PosInf => write!(f, "+inf"),
        }
    }
}

impl Serialize for ExtInt {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ExtInt::Fin(n) => s.serialize_i64(*n),
            other => s.serialize_str(&other.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for ExtInt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(n) => Ok(ExtInt::Fin(n)),
            Raw::Str(s) => ExtInt::parse(&s).map_err(serde::de::Error::custom),
        }
    }
}

/// Index of a nonempty open in [`FinSpace::opens`].
pub type OpenId = usize;

/// A finite T0 space. The empty open is not listed; presheaves are zero there.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinSpace {
    names: Vec<String>,
    opens: Vec<PointSet>,
    min_opens: Vec<PointSet>,
}

impl FinSpace {
    /// Validates a space given by point names and its opens (the empty set may be omitted).
    pub fn new(names: Vec<String>, opens: &[PointSet]) -> Result<FinSpace> {
        let n = names.len();
        if n == 0 {
            return Err(Error::InvalidSite("no points".into()));
        }
        if n > 64 {
            return Err(Error::InvalidSite(format!("{n} points exceed the 64-point limit")));
        }
        let full = PointSet::full(n);
        let mut list: Vec<PointSet> = opens.iter().copied().filter(|u| !u.is_empty()).collect();
        for u in &list {
            if !u.is_subset(full) {
                return Err(Error::InvalidSite(format!("open {:#b} names unknown points", u.0)));
            }
        }
        list.sort_by_key(|u| (u.len(), u.0));
        list.dedup();
        if !list.contains(&full) {
            return Err(Error::InvalidSite("lattice not closed under union: the whole space is not listed".into()));
        }
        for a in &list {
            for b in &list {
                if !list.contains(&a.union(*b)) {
                    return Err(Error::InvalidSite("opens not closed under union".into()));
                }
                let i = a.intersect(*b);
                if !i.is_empty() && !list.contains(&i) {
                    return Err(Error::InvalidSite("opens not closed under intersection".into()));
                }
            }
        }
        let min_opens: Vec<PointSet> =
            (0..n).map(|p| list.iter().filter(|u| u.contains(p)).fold(full, |acc, u| acc.intersect(*u))).collect();
        for p in 0..n {
            for q in p + 1..n {
                if min_opens[p] == min_opens[q] {
                    return Err(Error::InvalidSite(format!(
                        "points {} and {} are not separated (not T0)",
                        names[p], names[q]
                    )));
                }
            }
        }
        if n > SOFT_POINT_CAP || list.len() + 1 > SOFT_OPEN_CAP {
            log::warn!("large site: {n} points, {} opens", list.len() + 1);
        }
        Ok(FinSpace { names, opens: list, min_opens })
    }

    /// Builds a space from point names and opens given as lists of names.
    pub fn from_named(points: &[&str], opens: &[&[&str]]) -> Result<FinSpace> {
        let names: Vec<String> = points.iter().map(|s| s.to_string()).collect();
        let mut sets = Vec::new();
        for u in opens {
            let mut s = PointSet::EMPTY;
            for name in *u {
                let p = names
                    .iter()
                    .position(|x| x == name)
                    .ok_or_else(|| Error::InvalidSite(format!("unknown point {name:?}")))?;
                s = s.union(PointSet::singleton(p));
            }
            sets.push(s);
        }
        FinSpace::new(names, &sets)
    }

    /// Sierpiński space: `o` open, `c` closed.
    pub fn sierpinski() -> FinSpace {
        FinSpace::from_named(&["o", "c"], &[&["o"], &["o", "c"]]).expect("valid")
    }

    /// Three points `a, b` open and `c` closed, opens `{a}, {b}, {a,b}, X`.
    pub fn three_point() -> FinSpace {
        FinSpace::from_named(&["a", "b", "c"], &[&["a"], &["b"], &["a", "b"], &["a", "b", "c"]]).expect("valid")
    }

    /// Discrete space on `n` points.
    pub fn discrete(n: usize) -> FinSpace {
        let names = (0..n).map(|i| format!("p{i}")).collect();
        let opens: Vec<PointSet> = (1..1u64 << n).map(PointSet).collect();
        FinSpace::new(names, &opens).expect("valid")
    }

    pub fn npoints(&self) -> usize {
        self.names.len()
    }

    pub fn point_names(&self) -> &[String] {
        &self.names
    }

    pub fn point_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|x| x == name)
    }

    pub fn all_points(&self) -> PointSet {
        PointSet::full(self.npoints())
    }

    /// Nonempty opens, ordered by size then bitmask.
    pub fn opens(&self) -> &[PointSet] {
        &self.opens
    }

    pub fn nopens(&self) -> usize {
        self.opens.len()
    }

    pub fn open(&self, id: OpenId) -> PointSet {
        self.opens[id]
    }

    pub fn open_id(&self, u: PointSet) -> Option<OpenId> {
        self.opens.iter().position(|&v| v == u)
    }

    pub fn is_open(&self, u: PointSet) -> bool {
        u.is_empty() || self.opens.contains(&u)
    }

    pub fn is_closed(&self, f: PointSet) -> bool {
        self.is_open(self.all_points().minus(f))
    }

    pub fn min_open(&self, p: usize) -> PointSet {
        self.min_opens[p]
    }

    pub fn min_open_id(&self, p: usize) -> OpenId {
        self.open_id(self.min_opens[p]).expect("minimal opens are opens")
    }

    /// Smallest closed set containing `s`.
    pub fn closure(&self, s: PointSet) -> PointSet {
        let mut out = PointSet::EMPTY;
        for p in 0..self.npoints() {
            if !self.min_opens[p].intersect(s).is_empty() {
                out = out.union(PointSet::singleton(p));
            }
        }
        out
    }

    /// `q` is a generization of `p` (`q ∈ U_p`).
    pub fn generizes(&self, q: usize, p: usize) -> bool {
        self.min_opens[p].contains(q)
    }

    pub fn is_locally_closed(&self, s: PointSet) -> bool {
        // s is locally closed iff s = U ∩ cl(s) for the smallest open U containing s
        let u = s.points().fold(PointSet::EMPTY, |acc, p| acc.union(self.min_opens[p]));
        u.intersect(self.closure(s)) == s
    }

    /// Opens contained in `u`, including `u`.
    pub fn subopens(&self, u: PointSet) -> Vec<OpenId> {
        (0..self.nopens()).filter(|&i| self.opens[i].is_subset(u)).collect()
    }

    /// Pairs `(U, V)` with `V ⊊ U` and no open strictly between them.
    pub fn covering_pairs(&self) -> Vec<(OpenId, OpenId)> {
        let n = self.nopens();
        let lt = |a: OpenId, b: OpenId| a != b && self.opens[a].is_subset(self.opens[b]);
        let mut out = Vec::new();
        for u in 0..n {
            for v in 0..n {
                if lt(v, u) && !(0..n).any(|w| lt(v, w) && lt(w, u)) {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn format_set(&self, s: PointSet) -> String {
        let names: Vec<&str> = s.points().map(|p| self.names[p].as_str()).collect();
        format!("{{{}}}", names.join(","))
    }
}

/// A function from points to extended integers.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DFunction {
    pub values: Vec<ExtInt>,
}

impl DFunction {
    pub fn constant(space: &FinSpace, v: ExtInt) -> DFunction {
        DFunction { values: vec![v; space.npoints()] }
    }

    pub fn new(values: Vec<ExtInt>) -> DFunction {
        DFunction { values }
    }

    pub fn from_i64(values: &[i64]) -> DFunction {
        DFunction { values: values.iter().map(|&v| ExtInt::Fin(v)).collect() }
    }

    pub fn at(&self, p: usize) -> ExtInt {
        self.values[p]
    }

    pub fn values(&self) -> &[ExtInt] {
        &self.values
    }

    /// `p ↦ d(p) + k`.
    pub fn shifted(&self, k: i64) -> DFunction {
        DFunction { values: self.values.iter().map(|v| v.offset(k)).collect() }
    }

    pub fn check(&self, space: &FinSpace) -> Result<()> {
        if self.values.len() != space.npoints() {
            return Err(Error::Invalid(format!(
                "d-function has {} values for {} points",
                self.values.len(),
                space.npoints()
            )));
        }
        Ok(())
    }

    pub fn is_constant(&self) -> Option<ExtInt> {
        let first = *self.values.first()?;
        self.values.iter().all(|&v| v == first).then_some(first)
    }

    /// `d⁻¹([n, ∞])`.
    pub fn upper_set(&self, n: ExtInt) -> PointSet {
        PointSet(self.values.iter().enumerate().filter(|(_, &v)| v >= n).fold(0, |acc, (p, _)| acc | 1 << p))
    }

    fn thresholds(&self) -> Vec<ExtInt> {
        let mut t = self.values.clone();
        t.sort();
        t.dedup();
        t
    }
}

/// A threshold whose upper preimage fails the required topological condition.
pub fn admissibility_witness(space: &FinSpace, d: &DFunction) -> Option<(ExtInt, PointSet)> {
    d.thresholds().into_iter().map(|n| (n, d.upper_set(n))).find(|(_, s)| !space.is_open(*s))
}

/// Every preimage `d⁻¹([n, ∞])` is open.
pub fn d_is_admissible(space: &FinSpace, d: &DFunction) -> bool {
    admissibility_witness(space, d).is_none()
}

/// A threshold whose upper preimage is not closed.
pub fn truncatability_witness(space: &FinSpace, d: &DFunction) -> Option<(ExtInt, PointSet)> {
    d.thresholds().into_iter().map(|n| (n, d.upper_set(n))).find(|(_, s)| !space.is_closed(*s))
}

/// Every preimage `d⁻¹([n, ∞])` is closed, i.e. `d(p) ≥ d(q)` whenever `q ∈ U_p`.
/// This is the condition under which levelwise truncation is available.
pub fn d_is_truncatable(space: &FinSpace, d: &DFunction) -> bool {
    truncatability_witness(space, d).is_none()
}

/// `min_{p ∈ c} d(p)`.
pub fn n_of_open(d: &DFunction, c: PointSet) -> Result<ExtInt> {
    c.points().map(|p| d.at(p)).min().ok_or_else(|| Error::Precondition("n_of_open queried on the empty open".into()))
}

/// `max_{p ∈ c} d(p)`: the truncation level on `c`. On `U_p` it equals `d(p)`
/// for truncatable `d`.
pub fn truncation_level(d: &DFunction, c: PointSet) -> Result<ExtInt> {
    c.points().map(|p| d.at(p)).max().ok_or_else(|| Error::Precondition("truncation level of the empty open".into()))
}

/// A partition of the points into locally closed strata with integer perversities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stratification {
    pub strata: Vec<PointSet>,
    pub perversity: Vec<i64>,
}

impl Stratification {
    pub fn new(space: &FinSpace, strata: Vec<PointSet>, perversity: Vec<i64>) -> Result<Stratification> {
        if strata.len() != perversity.len() {
            return Err(Error::Invalid("one perversity value per stratum is required".into()));
        }
        let mut seen = PointSet::EMPTY;
        for s in &strata {
            if s.is_empty() {
                return Err(Error::Invalid("empty stratum".into()));
            }
            if !s.intersect(seen).is_empty() {
                return Err(Error::Invalid("strata overlap".into()));
            }
            if !space.is_locally_closed(*s) {
                return Err(Error::Invalid(format!("stratum {} is not locally closed", space.format_set(*s))));
            }
            seen = seen.union(*s);
        }
        if seen != space.all_points() {
            return Err(Error::Invalid("strata do not cover the space".into()));
        }
        Ok(Stratification { strata, perversity })
    }

    pub fn stratum_of(&self, p: usize) -> usize {
        self.strata.iter().position(|s| s.contains(p)).expect("strata cover the space")
    }
}

pub fn d_from_perversity(space: &FinSpace, strat: &Stratification) -> DFunction {
    DFunction { values: (0..space.npoints()).map(|p| ExtInt::Fin(strat.perversity[strat.stratum_of(p)])).collect() }
}
