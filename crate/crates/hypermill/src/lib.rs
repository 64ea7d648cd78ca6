//! hypermill: a workbench connecting hypergraph rewriting with first-order
//! multiplicative intuitionistic linear logic.
//!
//! The library has three layers that check each other:
//!
//! * [`hypergraph`] — selector-typed hypergraphs and their algebra
//!   (replacement, parallel composition, selector substitution,
//!   isomorphism, canonical forms), plus [`engine`], which runs hypergraph
//!   transformation systems via subgraph matching and derivation search.
//! * [`logic`] — formulas and sequents of first-order multiplicative
//!   intuitionistic linear logic with the `!` modality, and [`prover`], a
//!   focused proof-search engine with an independent proof checker.
//! * [`encoding`], [`grammars`], [`semantics`] — the bridges: graphs as
//!   formula diagrams, rewrite rules as closed implications, categorial
//!   grammars deciding graph membership through the prover, and hypergraph
//!   language models interpreting formulas as graph sets.
//!
//! Each side serves as a correctness oracle for the other: a derivation
//! found by the rewriting engine predicts a derivable sequent, and vice
//! versa; the `corpus` module bundles the worked examples and the seeded
//! random suites that exercise this equivalence.

pub mod symbol;

pub mod hypergraph;

pub mod logic;

pub mod prover;

pub mod engine;

pub mod encoding;

pub mod grammars;

pub mod semantics;

pub mod corpus;

mod book;

pub use symbol::Sym;
