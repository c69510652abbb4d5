use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::{Mat, ModHom, Module, Ring};
use crate::presheaf::{same_space, Presheaf, PresheafHom};
use crate::site::{FinSpace, OpenId};

/// A bounded chain complex of presheaves with terms in degrees `lo..=hi`.
#[derive(Clone, Debug)]
pub struct PComplex {
    space: Arc<FinSpace>,
    ring: Ring,
    lo: i64,
    terms: Vec<Presheaf>,
    /// `diffs[k][u]`: the differential from degree `lo + k + 1` to `lo + k` at open `u`.
    diffs: Vec<Vec<Mat>>,
    zero: Presheaf,
}

impl PartialEq for PComplex {
    fn eq(&self, other: &PComplex) -> bool {
        let (a, b) = (self.trimmed(), other.trimmed());
        a.ring == b.ring
            && same_space(&a.space, &b.space)
            && a.terms == b.terms
            && a.diffs == b.diffs
            && (a.terms.is_empty() || a.lo == b.lo)
    }
}

impl Eq for PComplex {}

impl PComplex {
    /// `diffs[k]` holds the per-open matrices of `d: X_{lo+k+1} → X_{lo+k}`.
    pub fn new(
        space: Arc<FinSpace>,
        ring: Ring,
        lo: i64,
        terms: Vec<Presheaf>,
        diffs: Vec<Vec<Mat>>,
    ) -> Result<PComplex> {
        if diffs.len() != terms.len().saturating_sub(1) {
            return Err(Error::Invalid(format!(
                "{} terms need {} differentials, got {}",
                terms.len(),
                terms.len().saturating_sub(1),
                diffs.len()
            )));
        }
        for t in &terms {
            if *t.ring() != ring {
                return Err(Error::RingMismatch(format!("term over {} in a complex over {ring}", t.ring())));
            }
            if !same_space(t.space_arc(), &space) {
                return Err(Error::Precondition("term lives on a different space".into()));
            }
        }
        let mut checked = Vec::with_capacity(diffs.len());
        for (k, d) in diffs.into_iter().enumerate() {
            let h = PresheafHom::new(terms[k + 1].clone(), terms[k].clone(), d)
                .map_err(|e| Error::Invalid(format!("differential out of degree {}: {e}", lo + k as i64 + 1)))?;
            checked.push(h.components().to_vec());
        }
        let zero = Presheaf::zero(space.clone(), ring);
        let x = PComplex { space, ring, lo, terms, diffs: checked, zero };
        x.check_square_zero()?;
        Ok(x)
    }

    pub(crate) fn from_parts(
        space: Arc<FinSpace>,
        ring: Ring,
        lo: i64,
        terms: Vec<Presheaf>,
        diffs: Vec<Vec<Mat>>,
    ) -> PComplex {
        debug_assert_eq!(diffs.len(), terms.len().saturating_sub(1));
        let diffs = diffs
            .into_iter()
            .enumerate()
            .map(|(k, d)| d.into_iter().enumerate().map(|(u, m)| terms[k].value(u).reduce_rows(&m)).collect())
            .collect();
        let zero = Presheaf::zero(space.clone(), ring);
        PComplex { space, ring, lo, terms, diffs, zero }
    }

    pub fn zero(space: Arc<FinSpace>, ring: Ring) -> PComplex {
        PComplex::from_parts(space, ring, 0, Vec::new(), Vec::new())
    }

    /// `P[n]`: the presheaf `p` concentrated in degree `n`.
    pub fn concentrated(p: &Presheaf, n: i64) -> PComplex {
        PComplex::from_parts(p.space_arc().clone(), *p.ring(), n, vec![p.clone()], Vec::new())
    }

    fn check_square_zero(&self) -> Result<()> {
        for n in self.lo + 2..=self.hi() {
            for u in 0..self.space.nopens() {
                let dd = self.d(n - 1, u).mul(&self.d(n, u), &self.ring);
                if !self.module(n - 2, u).reduce_rows(&dd).is_zero() {
                    return Err(Error::Invalid(format!(
                        "d∘d ≠ 0 from degree {n} at {}",
                        self.space.format_set(self.space.open(u))
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        for n in self.lo + 1..=self.hi() {
            self.d_hom(n).check_naturality()?;
        }
        self.check_square_zero()
    }

    pub fn space(&self) -> &FinSpace {
        &self.space
    }

    pub fn space_arc(&self) -> &Arc<FinSpace> {
        &self.space
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    /// Top degree; `lo - 1` for the empty complex.
    pub fn hi(&self) -> i64 {
        self.lo + self.terms.len() as i64 - 1
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(Presheaf::is_zero)
    }

    pub fn term(&self, n: i64) -> &Presheaf {
        if n < self.lo || n > self.hi() {
            &self.zero
        } else {
            &self.terms[(n - self.lo) as usize]
        }
    }

    pub fn terms(&self) -> &[Presheaf] {
        &self.terms
    }

    pub fn module(&self, n: i64, u: OpenId) -> &Module {
        self.term(n).value(u)
    }

    /// Restriction `X_n(U) → X_n(V)`.
    pub fn res_at(&self, n: i64, u: OpenId, v: OpenId) -> &Mat {
        self.term(n).res(u, v)
    }

    /// Matrix of `d_n : X_n(U) → X_{n-1}(U)`.
    pub fn d(&self, n: i64, u: OpenId) -> Mat {
        if n > self.lo && n <= self.hi() {
            self.diffs[(n - self.lo - 1) as usize][u].clone()
        } else {
            Mat::zeros(self.module(n - 1, u).ngens(), self.module(n, u).ngens())
        }
    }

    pub fn d_hom(&self, n: i64) -> PresheafHom {
        let comps = (0..self.space.nopens()).map(|u| self.d(n, u)).collect();
        PresheafHom::new_unchecked(self.term(n).clone(), self.term(n - 1).clone(), comps)
    }

    pub fn d_mod(&self, n: i64, u: OpenId) -> ModHom {
        ModHom::new_unchecked(self.module(n, u).clone(), self.module(n - 1, u).clone(), self.d(n, u))
    }

    /// Smallest range containing every nonzero term.
    pub fn support_range(&self) -> Option<(i64, i64)> {
        let nz: Vec<i64> = (self.lo..=self.hi()).filter(|&n| !self.term(n).is_zero()).collect();
        Some((*nz.first()?, *nz.last()?))
    }

    /// The same complex with zero end terms removed.
    pub fn trimmed(&self) -> PComplex {
        match self.support_range() {
            None => PComplex::zero(self.space.clone(), self.ring),
            Some((a, b)) => self.with_range(a, b),
        }
    }

    /// Pads with zero terms or drops zero end terms to occupy exactly `lo..=hi`.
    pub fn with_range(&self, lo: i64, hi: i64) -> PComplex {
        if hi < lo {
            return PComplex::zero(self.space.clone(), self.ring);
        }
        debug_assert!((self.lo..lo).chain(hi + 1..=self.hi()).all(|n| self.term(n).is_zero()));
        let terms: Vec<Presheaf> = (lo..=hi).map(|n| self.term(n).clone()).collect();
        let diffs: Vec<Vec<Mat>> =
            (lo + 1..=hi).map(|n| (0..self.space.nopens()).map(|u| self.d(n, u)).collect()).collect();
        PComplex { space: self.space.clone(), ring: self.ring, lo, terms, diffs, zero: self.zero.clone() }
    }

    pub fn total_gens(&self) -> usize {
        self.terms.iter().map(Presheaf::total_gens).sum()
    }

    pub fn check_compatible(&self, other: &PComplex) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch(format!("{} vs {}", self.ring, other.ring)));
        }
        if !same_space(&self.space, &other.space) {
            return Err(Error::Precondition("complexes live on different spaces".into()));
        }
        Ok(())
    }

    /// Every term is a cyclic sum, so homs out of it have a Yoneda description.
    pub fn has_cells(&self) -> bool {
        self.terms.iter().all(|t| t.cells().is_some())
    }
}

/// A chain map, one matrix per degree of the source and per open.
#[derive(Clone, Debug)]
pub struct ChainMap {
    pub source: PComplex,
    pub target: PComplex,
    comps: Vec<Vec<Mat>>,
}

impl PartialEq for ChainMap {
    fn eq(&self, other: &ChainMap) -> bool {
        if self.source != other.source || self.target != other.target {
            return false;
        }
        let (lo, hi) = (self.source.lo.min(other.source.lo), self.source.hi().max(other.source.hi()));
        (lo..=hi).all(|n| (0..self.source.space.nopens()).all(|u| self.component(n, u) == other.component(n, u)))
    }
}

impl Eq for ChainMap {}

impl ChainMap {
    /// `comps[k][u]` is the component in degree `source.lo() + k`.
    pub fn new(source: PComplex, target: PComplex, comps: Vec<Vec<Mat>>) -> Result<ChainMap> {
        source.check_compatible(&target)?;
        if comps.len() != source.len() {
            return Err(Error::Invalid(format!("{} components for {} source terms", comps.len(), source.len())));
        }
        let mut checked = Vec::with_capacity(comps.len());
        for (k, c) in comps.into_iter().enumerate() {
            let n = source.lo + k as i64;
            let h = PresheafHom::new(source.term(n).clone(), target.term(n).clone(), c)
                .map_err(|e| Error::Invalid(format!("component in degree {n}: {e}")))?;
            checked.push(h.components().to_vec());
        }
        let f = ChainMap { source, target, comps: checked };
        f.check_commutes()?;
        Ok(f)
    }

    pub(crate) fn from_fn(source: &PComplex, target: &PComplex, mut f: impl FnMut(i64, OpenId) -> Mat) -> ChainMap {
        let nop = source.space.nopens();
        let comps = (source.lo..=source.hi())
            .map(|n| (0..nop).map(|u| target.module(n, u).reduce_rows(&f(n, u))).collect())
            .collect();
        ChainMap { source: source.clone(), target: target.clone(), comps }
    }

    pub fn from_fn_checked(
        source: &PComplex,
        target: &PComplex,
        f: impl FnMut(i64, OpenId) -> Mat,
    ) -> Result<ChainMap> {
        let m = ChainMap::from_fn(source, target, f);
        ChainMap::new(m.source, m.target, m.comps)
    }

    pub fn identity(x: &PComplex) -> ChainMap {
        ChainMap::from_fn(x, x, |n, u| Mat::identity(x.module(n, u).ngens(), &x.ring))
    }

    pub fn zero(source: &PComplex, target: &PComplex) -> ChainMap {
        ChainMap::from_fn(source, target, |n, u| Mat::zeros(target.module(n, u).ngens(), source.module(n, u).ngens()))
    }

    pub fn check_commutes(&self) -> Result<()> {
        let ring = &self.source.ring;
        let (lo, hi) = (self.source.lo, self.source.hi() + 1);
        for n in lo..=hi {
            for u in 0..self.source.space.nopens() {
                let a = self.target.d(n, u).mul(&self.component(n, u), ring);
                let b = self.component(n - 1, u).mul(&self.source.d(n, u), ring);
                let m = self.target.module(n - 1, u);
                if m.reduce_rows(&a) != m.reduce_rows(&b) {
                    return Err(Error::Invalid(format!(
                        "chain map does not commute with d in degree {n} at {}",
                        self.source.space.format_set(self.source.space.open(u))
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        for n in self.source.lo..=self.source.hi() {
            self.component_hom(n).check_naturality()?;
        }
        self.check_commutes()
    }

    pub fn component(&self, n: i64, u: OpenId) -> Mat {
        if n >= self.source.lo && n <= self.source.hi() {
            self.comps[(n - self.source.lo) as usize][u].clone()
        } else {
            Mat::zeros(self.target.module(n, u).ngens(), self.source.module(n, u).ngens())
        }
    }

    pub fn component_hom(&self, n: i64) -> PresheafHom {
        let comps = (0..self.source.space.nopens()).map(|u| self.component(n, u)).collect();
        PresheafHom::new_unchecked(self.source.term(n).clone(), self.target.term(n).clone(), comps)
    }

    pub fn component_mod(&self, n: i64, u: OpenId) -> ModHom {
        ModHom::new_unchecked(self.source.module(n, u).clone(), self.target.module(n, u).clone(), self.component(n, u))
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &ChainMap) -> ChainMap {
        let ring = self.source.ring;
        ChainMap::from_fn(&first.source, &self.target, |n, u| self.component(n, u).mul(&first.component(n, u), &ring))
    }

    pub fn add(&self, other: &ChainMap) -> ChainMap {
        let ring = self.source.ring;
        ChainMap::from_fn(&self.source, &self.target, |n, u| self.component(n, u).add(&other.component(n, u), &ring))
    }

    pub fn sub(&self, other: &ChainMap) -> ChainMap {
        let ring = self.source.ring;
        ChainMap::from_fn(&self.source, &self.target, |n, u| self.component(n, u).sub(&other.component(n, u), &ring))
    }

    pub fn scale(&self, c: &crate::linalg::Elem) -> ChainMap {
        let ring = self.source.ring;
        ChainMap::from_fn(&self.source, &self.target, |n, u| self.component(n, u).scale(c, &ring))
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(|c| c.iter().all(Mat::is_zero))
    }

    /// Degree range where either side has terms.
    pub fn degree_range(&self) -> (i64, i64) {
        (self.source.lo.min(self.target.lo), self.source.hi().max(self.target.hi()))
    }

    /// Every component is surjective at every open, in degrees `≥ from`.
    pub fn is_surjective_from(&self, from: i64) -> bool {
        let (lo, hi) = self.degree_range();
        (lo.max(from)..=hi).all(|n| self.component_hom(n).is_surjective())
    }

    pub fn is_injective(&self) -> bool {
        (self.source.lo..=self.source.hi()).all(|n| self.component_hom(n).is_injective())
    }

    pub fn is_iso(&self) -> bool {
        let (lo, hi) = self.degree_range();
        (lo..=hi).all(|n| self.component_hom(n).is_iso())
    }
}
