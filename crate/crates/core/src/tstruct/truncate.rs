use crate::chain::{cokernel_complex, cone, cone_inclusion, hofib, hofib_projection, sub_complex, ChainMap, PComplex};
use crate::error::{Error, Result};
use crate::linalg::module::preimage_lattice;
use crate::linalg::{Mat, Subquotient};
use crate::site::{truncation_level, ExtInt};

use super::{in_leq, is_co_n_equivalence, is_n_equivalence, TStructure};

/// `X_{≥0} → X → X_{≤-1}`, levelwise short exact.
#[derive(Clone, Debug)]
pub struct TruncationTriangle {
    pub below: PComplex,
    pub map_in: ChainMap,
    pub map_out: ChainMap,
    pub above: PComplex,
}

/// `(X_{≥0})_k(C)` is `X_k(C)` above the level `n(C) = max_{p ∈ C} d(p)`, the
/// cycles at the level, and zero below it; `X_{≤-1}` is the quotient.
pub fn truncate(x: &PComplex, t: &TStructure) -> Result<TruncationTriangle> {
    t.require_truncatable()?;
    x.check_compatible(&PComplex::zero(t.space.clone(), *x.ring()))?;
    let ring = *x.ring();
    let space = x.space();
    let levels: Vec<ExtInt> =
        (0..space.nopens()).map(|u| truncation_level(&t.d, space.open(u)).expect("nonempty open")).collect();
    let (below, sqs) = sub_complex(x, x.lo(), x.hi(), |k, u| {
        let g = x.module(k, u).ngens();
        let rel = x.module(k, u).relation_columns();
        let e = ExtInt::Fin(k);
        let z = if e > levels[u] {
            return Subquotient::whole(x.module(k, u));
        } else if e == levels[u] {
            preimage_lattice(&ring, &x.d(k, u), x.module(k - 1, u))
        } else {
            rel.clone()
        };
        Subquotient::new(&ring, g, &z, &rel)
    });
    let map_in = ChainMap::from_fn(&below, x, |k, u| sqs[(k - below.lo()) as usize][u].lifts.clone());
    let (above, map_out) = cokernel_complex(&map_in);
    let tri = TruncationTriangle { below, map_in, map_out, above };
    audit(&tri)?;
    Ok(tri)
}

fn audit(tri: &TruncationTriangle) -> Result<()> {
    tri.below.validate()?;
    tri.above.validate()?;
    tri.map_in.validate()?;
    tri.map_out.validate()?;
    if !tri.map_in.is_injective() || !tri.map_out.is_surjective_from(i64::MIN) {
        return Err(Error::Invalid("truncation maps are not injective and surjective".into()));
    }
    let x = &tri.map_in.target;
    for k in x.lo()..=x.hi() {
        for u in 0..x.space().nopens() {
            let ker = tri.map_out.component_mod(k, u).kernel_subquotient();
            let inc = tri.map_in.component_mod(k, u);
            if ker.lifts.columns().iter().any(|v| inc.solve(v).is_none()) {
                return Err(Error::Invalid(format!("truncation triangle is not exact in degree {k}")));
            }
        }
    }
    Ok(())
}

/// `(X_{≥0})_{≤0}`: homology stalks concentrated in degree `d(p)`.
pub fn heart_project(x: &PComplex, t: &TStructure) -> Result<PComplex> {
    let below = truncate(x, t)?.below;
    Ok(truncate(&below, &t.shifted(1))?.above)
}

/// `f = h ∘ g` with `g` an `n`-equivalence and `h` a co-`n`-equivalence.
#[derive(Clone, Debug)]
pub struct TFactorization {
    pub middle: PComplex,
    pub g: ChainMap,
    pub h: ChainMap,
}

/// With `F = hofib(f)` and `F' ⊆ F` its truncation in `D_{≥n}`, the middle
/// object is `cone(F' → X)`. The map to `Y` is `f` on `X` and `(x, y) ↦ -y`
/// on `F'`, a null-homotopy of `F' → X → Y`; so `h ∘ g = f` on the nose.
pub fn factor_t(f: &ChainMap, t: &TStructure, n: i64) -> Result<TFactorization> {
    t.require_truncatable()?;
    let (x, y) = (&f.source, &f.target);
    let ring = *x.ring();
    let fib = hofib(f);
    let tri = truncate(&fib, &t.shifted(n))?;
    let phi = hofib_projection(f).compose(&tri.map_in);
    let w = cone(&phi);
    let g = cone_inclusion(&phi);
    let sub = &tri.below;
    let h = ChainMap::from_fn(&w, y, |k, u| {
        let a = sub.module(k - 1, u).ngens();
        let gx = x.module(k - 1, u).ngens();
        let gy = y.module(k, u).ngens();
        // F_{k-1} = X_{k-1} ⊕ Y_k, so `-y` is minus the second block
        let mut s = Mat::zeros(gy, gx + gy);
        s.paste(0, gx, &Mat::identity(gy, &ring).neg(&ring));
        let on_sub = s.mul(&tri.map_in.component(k - 1, u), &ring);
        let mut m = Mat::zeros(gy, a + x.module(k, u).ngens());
        m.paste(0, 0, &on_sub);
        m.paste(0, a, &f.component(k, u));
        m
    });
    let fac = TFactorization { middle: w, g, h };
    fac.g.validate()?;
    fac.h.validate()?;
    if fac.h.compose(&fac.g) != *f {
        return Err(Error::Invalid("t-factorization does not compose to the input".into()));
    }
    if !is_n_equivalence(&fac.g, t, n) || !is_co_n_equivalence(&fac.h, t, n) {
        return Err(Error::Invalid("t-factorization fails its equivalence audit".into()));
    }
    debug_assert!(in_leq(&tri.above, &t.d, n - 1));
    Ok(fac)
}
