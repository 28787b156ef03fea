//! Graph algebras with finitely many ideals: admissibility, the ideal
//! poset, the invariant `XKδ` and its comparison.

mod compare;
#[allow(clippy::module_inception)]
mod graph;
mod ideals;
mod invariant;

pub use compare::{compare_graph_invariants, unit_compare, GraphVerdict, GraphWitness, Layer};
pub use graph::{admissible, parse_graph, write_graph, AdmissibilityReport, DirectedGraph};
pub use ideals::{closure, hereditary_saturated, is_hereditary, is_saturated, members, IdealPoset, VertexSet};
pub use invariant::{
    colimit_map, k1_is_free, pv_extension, pv_matrix, whole_k_theory, xk_invariant, xk_invariant_seeded, XkInvariant,
};
