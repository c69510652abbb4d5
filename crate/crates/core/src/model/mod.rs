//! The projective model structure on bounded complexes of presheaves.

mod factor;
mod lift;
mod tensor;
mod verify;

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::chain::{disk, is_presheaf_quasi_iso, sphere, ChainMap, PComplex};
use crate::linalg::{Mat, Ring};
use crate::site::{FinSpace, OpenId};

pub use factor::{cofibrant_replacement, factor_cof_acyclicfib, Factorization};
pub use lift::{has_rlp, rlp_failures, solve_lift, squares, LiftOutcome, LiftingSquare, NoLift};
pub use tensor::{cylinder, pushout_product, Cylinder, PushoutProduct};
pub use verify::{check_instance, verify_axiom, AxiomKind, AxiomReport, InstanceResult, SampleSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GenKind {
    I,
    J,
}

/// A generating cofibration `i_{C,n} : R_C[n] → D_C(n)` or `j_{C,n} : 0 → D_C(n)`,
/// where the disk `D_C(n)` has `R_C` in degrees `n + 1` and `n`.
#[derive(Clone, Debug)]
pub struct GenCof {
    pub kind: GenKind,
    pub open: OpenId,
    pub degree: i64,
    pub realized: ChainMap,
}

pub fn gen_cof(space: &Arc<FinSpace>, ring: Ring, kind: GenKind, c: OpenId, n: i64) -> GenCof {
    let set = space.open(c);
    let target = disk(space, ring, set, n).expect("nonempty open");
    let realized = match kind {
        GenKind::I => {
            let source = sphere(space, ring, set, n).expect("nonempty open");
            ChainMap::from_fn(&source, &target, |m, u| {
                let g = source.module(m, u).ngens();
                if m == n {
                    Mat::identity(g, &ring)
                } else {
                    Mat::zeros(target.module(m, u).ngens(), g)
                }
            })
        }
        GenKind::J => ChainMap::zero(&PComplex::zero(space.clone(), ring), &target),
    };
    GenCof { kind, open: c, degree: n, realized }
}

/// Levelwise surjective at every open and degree.
pub fn is_fibration(f: &ChainMap) -> bool {
    f.is_surjective_from(i64::MIN)
}

/// Levelwise surjective in degrees `≥ 1`, the fibrations of nonnegatively graded complexes.
pub fn is_fibration_nonneg(f: &ChainMap) -> bool {
    f.is_surjective_from(1)
}

pub fn is_acyclic_fibration(f: &ChainMap) -> bool {
    is_fibration(f) && is_presheaf_quasi_iso(f)
}
