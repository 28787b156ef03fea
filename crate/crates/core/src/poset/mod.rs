//! Modules over the integral incidence algebra `ℤ[X]` of a finite poset:
//! representations, projective resolutions, Ext groups, Yoneda classes of
//! 2-extensions and bounded isomorphism search.

mod bimodule;
mod ext;
mod format;
mod iso;
#[allow(clippy::module_inception)]
mod poset;
mod rep;
mod resolution;
mod yoneda;

pub use bimodule::{bimodule_complex, verify_bimodule_resolution, BimoduleComplex, BimoduleReport};
pub use ext::{ext_poset, ext_poset_seeded, sierpinski_ext2, ups_ext, PosetExt};
pub use format::{parse_poset, parse_rep, write_poset, write_rep};
pub use iso::{box_coords, hom_candidates, rep_iso_bounded, rep_isomorphisms, RepBounds, RepIsoVerdict};
pub use poset::{default_labels, enumerate_posets, FinitePoset, UpsDecision};
pub use rep::{rep_exact_at, rep_hom, ProjMap, Projective, QuiverRep, RepHom, RepMorphism};
pub use resolution::{resolve_projective, ProjResolution};
pub use yoneda::{
    class_resolution, ext2_compatible, lift_chain_map, yoneda_class, yoneda_class_randomized,
    yoneda_class_with,
    Ext2Class, TwoExtension,
};
