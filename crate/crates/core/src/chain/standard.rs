use std::sync::Arc;

use crate::error::Result;
use crate::linalg::{Mat, Ring};
use crate::presheaf::{direct_sum, free_presheaf};
use crate::site::{FinSpace, PointSet};

use super::PComplex;

/// `R_C[n]`.
pub fn sphere(space: &Arc<FinSpace>, ring: Ring, c: PointSet, n: i64) -> Result<PComplex> {
    Ok(PComplex::concentrated(&free_presheaf(space.clone(), ring, c)?, n))
}

/// `R_C` in degrees `n + 1` and `n` joined by the identity.
pub fn disk(space: &Arc<FinSpace>, ring: Ring, c: PointSet, n: i64) -> Result<PComplex> {
    let rc = free_presheaf(space.clone(), ring, c)?;
    let d = (0..space.nopens()).map(|u| Mat::identity(rc.value(u).ngens(), &ring)).collect();
    Ok(PComplex::from_parts(space.clone(), ring, n, vec![rc.clone(), rc], vec![d]))
}

/// The unit interval: `R ⊕ R` in degree 0, `R` in degree 1, `d v = u₀ - u₁`.
pub fn unit_interval(space: &Arc<FinSpace>, ring: Ring) -> PComplex {
    let r = free_presheaf(space.clone(), ring, space.all_points()).expect("whole space");
    let rr = direct_sum(&[&r, &r]);
    let d = vec![Mat::from_i64(&ring, &[&[1], &[-1]], 1); space.nopens()];
    PComplex::from_parts(space.clone(), ring, 0, vec![rr, r], vec![d])
}

/// `R[0]`, the unit for the tensor product.
pub fn unit_complex(space: &Arc<FinSpace>, ring: Ring) -> PComplex {
    PComplex::concentrated(&free_presheaf(space.clone(), ring, space.all_points()).expect("whole space"), 0)
}
