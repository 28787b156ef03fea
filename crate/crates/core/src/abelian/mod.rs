//! Exact linear algebra over ℤ: finitely generated abelian groups as
//! presentations, morphisms, `Hom_ℤ`, `Ext¹_ℤ`, kernels and cokernels.

mod group;
mod hom;
mod ops;
mod subquotient;

pub use group::{describe_factors, FgAbGroup, GroupMorphism};
pub use hom::{
    ext1_contravariant, ext1_covariant, ext1_z, hom_contravariant, hom_covariant, hom_z,
    induced_map, relation_lift, Ext1Group, Functor, HomGroup, InducedMap,
};
pub use ops::{
    check_kernel_cokernel, is_exact_at, is_injective, is_isomorphism, is_surjective, iso_groups,
    kernel_cokernel, kernel_subquotient, smith_coordinates, IsoDecision, KernelCokernel,
};
pub use subquotient::{cohomology, Subquotient};

#[cfg(test)]
mod tests;
