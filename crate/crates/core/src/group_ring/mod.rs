//! Arithmetic in `Z_{2^m}[G]`, two-sided ideals, residue rings and their
//! unit groups.

mod element;
mod ideal;
mod identities;
pub mod linalg;
mod literal;
mod quotient;

pub use element::{GroupRing, RingElement, MAX_CHAR_EXPONENT};
pub use ideal::{close_within_limit, ideal_closure, IdealBasis};
pub use identities::{cyclic_quotient_order, scalar_unit_identity_check};
pub use linalg::odd_inverse;
pub use literal::{format_element, parse_element_literal};
pub use quotient::{QuotientRing, UnitGroup, MAX_RESIDUES};
