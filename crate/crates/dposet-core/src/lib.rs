//! Finite digraphs under the substructure and embeddability orders.
//!
//! The crate provides exact decision procedures for both orders, the named
//! digraph families and composite constructions, enumeration of all
//! isomorphism types up to a vertex bound with both Hasse diagrams, local
//! automorphism rules with group closure, a small first-order language over
//! the poset signature, and a verifier that executes the defining conditions
//! of the structural lemmas against independent oracles — including the
//! edge-supporting encode/decode pipeline.

pub mod catalog;
pub mod digraph;
pub mod embed;
pub mod error;
pub mod families;
pub mod fo;
pub mod lemmas;
pub mod rules;

pub use catalog::{Catalog, Level, OrderKind, Relations};
pub use digraph::{CanonCode, Digraph, LoopPart, UnaryKind, MAX_VERTICES};
pub use embed::{is_embeddable, is_substructure};
