//! Exact computations in Houghton's groups H_n.
//!
//! The group H_n consists of the permutations of n disjoint discrete rays
//! that act as a fixed integer translation on each ray outside a finite
//! set. This crate provides:
//!
//! - exact element arithmetic in canonical form ([`Element`]),
//! - generator words and evaluation ([`Word`], [`GeneratingSet`]),
//! - word-metric machinery: the complexity lower bound, constructive word
//!   synthesis within 7 P log2 P, and an exact BFS length oracle
//!   ([`metric`]),
//! - the structural maps: ray-permutation automorphisms, the subgroups U_p
//!   with their indices and ray splitting, the doubling embedding, point
//!   stabilizers and quasi-isometry witnesses ([`morphisms`]).

pub mod element;
pub mod error;
pub mod metric;
pub mod morphisms;
pub mod words;

pub use element::{
    generator, minimal_translation, transposition, ComplexityProfile, Element, ElementRecord,
    RayPoint,
};
pub use error::{Error, Result};
pub use metric::{BallTable, SynthesisReport};
pub use morphisms::{NpElement, NpElementRecord, RayPermutation};
pub use words::{random_element, GeneratingSet, GensetName, Letter, Word};
