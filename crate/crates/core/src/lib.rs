//! Braid-group orbits on Nielsen classes of finite permutation groups.
//!
//! Two orbit engines live here: an exhaustive breadth-first oracle
//! ([`classic`]) and a head/tail matching engine ([`matching`]) that builds
//! the orbits out of shorter half-tuples glued along double cosets of a
//! centralizer. [`genus`] uses them to classify genus-zero systems of
//! primitive affine groups, with group data supplied by [`catalog`].

pub mod affine;
pub mod braid;
pub mod catalog;
pub mod classic;
pub mod error;
pub mod graph;
pub mod genus;
pub mod group;
pub mod matching;
pub mod perm;

pub use error::{Error, Result};
pub use group::{ClassId, ClassTable, ConjClass, PermGroup, Subgroup};
pub use perm::Perm;
