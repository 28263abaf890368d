//! Realizing finite 2-groups as unit groups of finite rings of
//! characteristic `2^m`.
//!
//! The crate builds groups from presentations, computes in modular group
//! rings `Z_{2^m}[G]`, constructs realizing residue rings for groups of
//! exponent at most 4, applies non-realizability screens, and searches for
//! realizing ideals beyond that range. Positive answers come with
//! certificates that can be re-verified independently.

pub mod certificate;
pub mod cli;
pub mod error;
pub mod group_core;
pub mod group_ring;
pub mod screeners;
pub mod search;
pub mod star_realizer;

pub use error::{Error, Result};
