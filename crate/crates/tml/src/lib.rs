//! Type checker, free-groupoid evaluator and realizability checker for
//! intensional Martin-Löf type theory with a basic type generated by a
//! reflexive directed graph, truncated at dimension one.
//!
//! The modules build on each other in this order:
//!
//! * [`syntax`]: nameless terms, weakening, substitution.
//! * [`graph`]: theories (graphs) and reduced words of the free groupoid.
//! * [`parser`]: `.mlg` theory files and S-expression terms.
//! * [`kernel`]: type checking, normalization, layered conversion.
//! * [`model`]: evaluation into the groupoid model over the free groupoid.
//! * [`jterms`]: transports, parameterized and sequential J-terms.
//! * [`realizability`]: realizers for closed terms and their checker.
//! * [`retract`]: density, the retract onto the free groupoid, canonicity.
//! * [`harness`]: seeded generators of theories and well-typed terms.
//! * [`cli`]: the `tml` command-line front end.

pub mod cli;
pub mod graph;
pub mod harness;
pub mod jterms;
pub mod kernel;
pub mod model;
pub mod parser;
pub mod realizability;
pub mod retract;
pub mod syntax;

pub use graph::{Orientation, ReducedWord, Theory};
pub use syntax::{Context, Name, Term};
