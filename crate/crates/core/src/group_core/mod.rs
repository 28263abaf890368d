//! Finite 2-groups as Cayley tables: construction from presentations and
//! products, structural invariants, isomorphism and direct decomposition.

mod cayley;
pub mod catalog;
mod decompose;
mod element_set;
mod iso;
mod presentation;
mod structure;
mod todd_coxeter;
pub mod words;

pub use cayley::{CayleyGroup, Generator, MAX_ORDER, MAX_TABLE_ORDER};
pub use catalog::{build_group, parse_group_spec, GroupAtom, GroupSpec};
pub use decompose::{direct_factors, is_indecomposable, normal_subgroups, INDECOMPOSABLE_CAP};
pub use element_set::ElementSet;
pub use iso::{fingerprint, is_isomorphic, is_isomorphic_with_budget, verify_isomorphism, DEFAULT_ISO_BUDGET};
pub use presentation::{Presentation, Relator, DEFAULT_COSET_LIMIT};
pub use structure::{
    abelian_invariants, derived_subgroup, direct_product, frattini_subgroup, generate, minimal_generators,
    minimal_generators_from, n_a, nilpotency_class, quotient_group, structure_report, subgroup_as_group,
    subset_abelian_invariants, StructureReport,
};
