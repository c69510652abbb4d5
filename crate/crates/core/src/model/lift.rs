use crate::chain::{ChainMap, PComplex};
use crate::error::{Error, Result};
use crate::linalg::module::preimage_lattice;
use crate::linalg::{Elem, Mat, ModHom};
use crate::site::OpenId;

use super::{gen_cof, GenCof, GenKind};

/// A commutative square `right ∘ top = bottom ∘ left` with `left` a generator.
#[derive(Clone, Debug)]
pub struct LiftingSquare {
    pub left: GenCof,
    pub right: ChainMap,
    pub top: ChainMap,
    pub bottom: ChainMap,
}

impl LiftingSquare {
    pub fn new(left: GenCof, right: ChainMap, top: ChainMap, bottom: ChainMap) -> Result<LiftingSquare> {
        let l = &left.realized;
        if top.source != l.source
            || top.target != right.source
            || bottom.source != l.target
            || bottom.target != right.target
        {
            return Err(Error::Invalid("square maps do not fit together".into()));
        }
        if right.compose(&top) != bottom.compose(l) {
            return Err(Error::Invalid("square does not commute".into()));
        }
        Ok(LiftingSquare { left, right, top, bottom })
    }
}

/// The linear system that has no solution.
#[derive(Clone, Debug)]
pub struct NoLift {
    pub open: OpenId,
    pub degree: i64,
    pub system: Mat,
    pub rhs: Vec<Elem>,
}

#[derive(Clone, Debug)]
pub enum LiftOutcome {
    Lift(ChainMap),
    NoLift(NoLift),
}

impl LiftOutcome {
    pub fn is_lift(&self) -> bool {
        matches!(self, LiftOutcome::Lift(_))
    }
}

/// The map `D_C(n) → X` (or `R_C[m] → X`) sending the top generator at `C` to `x ∈ X_top(C)`.
fn element_map(source: &PComplex, x: &PComplex, c: OpenId, top: i64, elem: &[Elem]) -> ChainMap {
    let ring = *x.ring();
    let below = x.d(top, c).apply(elem, &ring);
    ChainMap::from_fn(source, x, |m, u| {
        let rows = x.module(m, u).ngens();
        if source.module(m, u).ngens() == 0 {
            return Mat::zeros(rows, 0);
        }
        let v = if m == top { elem } else { &below[..] };
        Mat::column(x.res_at(m, c, u).apply(v, &ring))
    })
}

/// Solves for a diagonal filler `D_C(n) → X`, then audits both triangles.
pub fn solve_lift(sq: &LiftingSquare) -> Result<LiftOutcome> {
    let f = &sq.right;
    let (x, y) = (&f.source, &f.target);
    let (c, n) = (sq.left.open, sq.left.degree);
    let yv = sq.bottom.component(n + 1, c).col(0);
    let (system, target, rhs) = match sq.left.kind {
        GenKind::J => (f.component(n + 1, c), y.module(n + 1, c).clone(), yv),
        GenKind::I => {
            let xv = sq.top.component(n, c).col(0);
            let a = x.d(n + 1, c).vstack(&f.component(n + 1, c));
            let t = x.module(n, c).direct_sum(y.module(n + 1, c));
            (a, t, xv.into_iter().chain(yv).collect())
        }
    };
    let h = ModHom::new_unchecked(x.module(n + 1, c).clone(), target, system.clone());
    let Some(sol) = h.solve(&rhs) else {
        return Ok(LiftOutcome::NoLift(NoLift { open: c, degree: n, system, rhs }));
    };
    let lift = element_map(&sq.left.realized.target, x, c, n + 1, &sol);
    if lift.compose(&sq.left.realized) != sq.top || f.compose(&lift) != sq.bottom {
        return Err(Error::Invalid(format!(
            "lift at ({}, {n}) fails its audit",
            x.space().format_set(x.space().open(c))
        )));
    }
    Ok(LiftOutcome::Lift(lift))
}

/// Squares from `gen` to `right` whose parameters generate all commutative squares.
///
/// For `j_{C,n}` the parameter is `y ∈ Y_{n+1}(C)`; for `i_{C,n}` it is a pair
/// `(x, y) ∈ X_n(C) ⊕ Y_{n+1}(C)` with `dx = 0` and `f x = dy`.
pub fn squares(gen: &GenCof, right: &ChainMap) -> Vec<LiftingSquare> {
    let (x, y) = (&right.source, &right.target);
    let ring = *x.ring();
    let (c, n) = (gen.open, gen.degree);
    let (a, b) = (&gen.realized.source, &gen.realized.target);
    let (gx, gy) = (x.module(n, c).ngens(), y.module(n + 1, c).ngens());
    let params: Vec<(Vec<Elem>, Vec<Elem>)> = match gen.kind {
        GenKind::J => Mat::identity(gy, &ring).columns().into_iter().map(|v| (Vec::new(), v)).collect(),
        GenKind::I => {
            let mut h = Mat::zeros(x.module(n - 1, c).ngens() + y.module(n, c).ngens(), gx + gy);
            h.paste(0, 0, &x.d(n, c));
            h.paste(x.module(n - 1, c).ngens(), 0, &right.component(n, c));
            h.paste(x.module(n - 1, c).ngens(), gx, &y.d(n + 1, c).neg(&ring));
            let t = x.module(n - 1, c).direct_sum(y.module(n, c));
            preimage_lattice(&ring, &h, &t)
                .columns()
                .into_iter()
                .map(|v| (v[..gx].to_vec(), v[gx..].to_vec()))
                .collect()
        }
    };
    params
        .into_iter()
        .map(|(xv, yv)| {
            let top = match gen.kind {
                GenKind::J => ChainMap::zero(a, x),
                GenKind::I => element_map(a, x, c, n, &xv),
            };
            let bottom = element_map(b, y, c, n + 1, &yv);
            LiftingSquare { left: gen.clone(), right: right.clone(), top, bottom }
        })
        .collect()
}

/// Generators `(C, n)` of the given kind, over the window `[lo - 1, hi + 1]`,
/// against which `right` fails to have the lifting property.
pub fn rlp_failures(right: &ChainMap, kind: GenKind) -> Vec<(OpenId, i64)> {
    let space = right.source.space_arc();
    let ring = *right.source.ring();
    let (lo, hi) = right.degree_range();
    let mut out = Vec::new();
    for n in lo - 1..=hi + 1 {
        for c in 0..space.nopens() {
            let gen = gen_cof(space, ring, kind, c, n);
            let ok = squares(&gen, right).iter().all(|sq| solve_lift(sq).expect("lift audit").is_lift());
            if !ok {
                out.push((c, n));
            }
        }
    }
    out
}

/// Right lifting property against every generator of the given kind.
pub fn has_rlp(right: &ChainMap, kind: GenKind) -> bool {
    rlp_failures(right, kind).is_empty()
}
