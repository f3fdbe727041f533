//! Logic programs read as definitions.
//!
//! A program is a definition of its predicates together with a Herbrand
//! axiom fixing its constant and function symbols as constructors of the
//! universe. This crate evaluates such definitions over finite and
//! depth-bounded structures, checks whether a structure is a model, splits
//! programs into modules, and cross-checks the fixpoint engine against
//! brute-force oracles.
//!
//! The guide in `book/` walks through the concepts with runnable examples.

pub mod definition;
pub mod engine;
pub mod exactness;
pub mod iso;
pub mod oracle;
pub mod parse;
pub mod rule;
pub mod structure;
pub mod term;
pub mod vocab;

pub use definition::{
    classify, is_inductive, stratify, validate_partition, Definition, DefinitionError,
    DependencyGraph, Part, PartitionReport, PartitionViolation, Polarity, Program,
};
pub use exactness::Exactness;
pub use iso::{find_isomorphism, rename, satisfies_herbrand_axiom, Bijection, HerbrandCheck};
pub use rule::{Atom, GroundAtom, Literal, Rule};
pub use structure::{BuiltinOp, Form, FunctionValue, ModelError, Structure};
pub use term::{herbrand_universe, GroundTerm, Term};
pub use vocab::{ConstructorSet, Name, Symbol, SymbolKind, Vocabulary};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/definitions.md")]
    mod definitions {}
    #[doc = include_str!("../../../book/src/models.md")]
    mod models {}
    #[doc = include_str!("../../../book/src/herbrand.md")]
    mod herbrand {}
    #[doc = include_str!("../../../book/src/modules.md")]
    mod modules {}
    #[doc = include_str!("../../../book/src/oracles.md")]
    mod oracles {}
    #[doc = include_str!("../../../book/src/formats.md")]
    mod formats {}
}
