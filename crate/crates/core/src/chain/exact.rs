use crate::linalg::{Mat, Subquotient};
use crate::presheaf::Presheaf;

use super::{ChainMap, PComplex};

fn induced(sqs: &[Subquotient], m: &Mat, tgt: &Subquotient, ring: &crate::linalg::Ring, u: usize) -> Mat {
    tgt.coords_matrix(&m.mul(&sqs[u].lifts, ring)).expect("map preserves the subquotients")
}

/// Builds the complex of levelwise subquotients `sq(n, u)` of `x` together
/// with the ambient-to-subquotient data.
pub(crate) fn sub_complex(
    x: &PComplex,
    lo: i64,
    hi: i64,
    sq: impl Fn(i64, usize) -> Subquotient,
) -> (PComplex, Vec<Vec<Subquotient>>) {
    let ring = *x.ring();
    let nop = x.space().nopens();
    let sqs: Vec<Vec<Subquotient>> = (lo..=hi).map(|n| (0..nop).map(|u| sq(n, u)).collect()).collect();
    let terms: Vec<Presheaf> = (lo..=hi)
        .map(|n| {
            let s = &sqs[(n - lo) as usize];
            let term = x.term(n);
            Presheaf::from_fn(x.space_arc().clone(), ring, s.iter().map(|q| q.module.clone()).collect(), |u, v| {
                induced(s, term.res(u, v), &s[v], &ring, u)
            })
        })
        .collect();
    let diffs = (lo + 1..=hi)
        .map(|n| {
            let (s, t) = (&sqs[(n - lo) as usize], &sqs[(n - 1 - lo) as usize]);
            (0..nop).map(|u| induced(s, &x.d(n, u), &t[u], &ring, u)).collect()
        })
        .collect();
    (PComplex::from_parts(x.space_arc().clone(), ring, lo, terms, diffs), sqs)
}

/// Levelwise kernel of `f` with its inclusion into the source.
pub fn kernel_complex(f: &ChainMap) -> (PComplex, ChainMap) {
    let x = &f.source;
    let (k, sqs) = sub_complex(x, x.lo(), x.hi(), |n, u| f.component_mod(n, u).kernel_subquotient());
    let incl = ChainMap::from_fn(&k, x, |n, u| sqs[(n - k.lo()) as usize][u].lifts.clone());
    (k, incl)
}

/// Levelwise cokernel of `f` with its projection from the target.
pub fn cokernel_complex(f: &ChainMap) -> (PComplex, ChainMap) {
    let (c, proj, _) = cokernel_with_lifts(f);
    (c, proj)
}

/// Also returns, per degree and open, target representatives of the cokernel generators.
pub(crate) fn cokernel_with_lifts(f: &ChainMap) -> (PComplex, ChainMap, Vec<Vec<Mat>>) {
    let y = &f.target;
    let ring = *y.ring();
    let (c, sqs) = sub_complex(y, y.lo(), y.hi(), |n, u| {
        if f.component(n, u).is_zero() {
            Subquotient::whole(y.module(n, u))
        } else {
            f.component_mod(n, u).cokernel_subquotient()
        }
    });
    let proj = ChainMap::from_fn(y, &c, |n, u| {
        sqs[(n - c.lo()) as usize][u]
            .coords_matrix(&Mat::identity(y.module(n, u).ngens(), &ring))
            .expect("whole lattice")
    });
    let lifts = sqs.into_iter().map(|v| v.into_iter().map(|q| q.lifts).collect()).collect();
    (c, proj, lifts)
}
