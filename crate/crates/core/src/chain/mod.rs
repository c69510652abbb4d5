//! Bounded chain complexes of presheaves.

mod classify;
mod complex;
mod exact;
mod hom;
mod homology;
mod ops;
mod standard;

pub use classify::{classify, is_presheaf_quasi_iso, is_stalkwise_quasi_iso, IsoLevel, WeakEqReport, Witness};
pub use complex::{ChainMap, PComplex};
pub use exact::{cokernel_complex, kernel_complex};
pub(crate) use exact::{cokernel_with_lifts, sub_complex};
pub use hom::{chain_maps, homotopy_classes, HomSpace, HomotopyClasses, MappingComplex, ModComplex};
pub use homology::{cycle_class, homology, homology_map, is_acyclic};
pub(crate) use homology::{homology_map_at, homology_sq};
pub use ops::{
    cone, cone_inclusion, cone_projection, direct_sum_complex, direct_sum_maps, hofib, hofib_inclusion,
    hofib_projection, sheafify_complex, shift, shift_map, simplicial_tensor, tensor_maps, tensor_total,
    tensor_unit_map, SimplicialComplex,
};
pub use standard::{disk, sphere, unit_complex, unit_interval};

#[cfg(test)]
mod tests;
