//! Computational group theory for chiral 4-polytopes of type {4,4,4}.
//!
//! The crate is organised bottom-up: [`word`] and [`parse`] handle free-group
//! words and presentations, [`tc`] enumerates cosets, [`perm`] works with
//! finite permutation groups, [`rewrite`] produces subgroup presentations and
//! abelian invariants, [`polytope`] checks rotation triples and coset
//! geometries, and [`families`] wires everything into the two families
//! `P_m` and `Q_m`.

pub mod error;
pub mod families;
pub mod parse;
pub mod perm;
pub mod polytope;
pub mod rewrite;
pub mod tc;
pub mod word;

pub use error::{FamilyError, ParseError, PermError, PolytopeError, TableError, WordError};
pub use parse::{expand, parse_presentation, parse_word, parse_word_list, Expr};
pub use perm::{PermGroup, PermGroupHandle, Permutation};
pub use tc::{enumerate, CosetTable, EnumerationConfig, Status, Strategy};
pub use word::{Generator, Presentation, Word};
