//! Automatic structures and hyperbolicity for finitely presented groups.
//!
//! This crate implements a pipeline for analysing a finite group presentation:
//!
//! - Knuth–Bendix completion into a confluent short-lex rewriting system
//!   ([`rewrite`]), giving normal forms and the word problem.
//! - The short-lex automatic structure: word acceptor, multiplier automata and
//!   the word-difference machine ([`autstruct`]).
//! - Verification of word-hyperbolicity by closing the set of geodesic
//!   word-differences under bigon counterexamples ([`hyperbolicity`]).
//! - Computation of the thinness constant δ for short-lex geodesic triangles
//!   ([`thinness`]).
//! - A brute-force Cayley-ball oracle used to corroborate the automata-based
//!   results at small radius ([`oracle`]).
//!
//! Finite-state machinery (determinization, minimization, products over padded
//! pairs, reversal with subset labels) lives in [`fsa`]; text formats for
//! automata, presentations and reports live in [`fsa::io`], [`presentation`]
//! and [`report`].

pub mod alphabet;
pub mod autstruct;
pub mod error;
pub mod fsa;
pub mod hyperbolicity;
pub mod oracle;
pub mod presentation;
pub mod report;
pub mod rewrite;
pub mod thinness;

pub use alphabet::{Alphabet, Letter, Word};
pub use error::Error;
pub use fsa::Automaton;
pub use presentation::Presentation;
pub use rewrite::{KbLimits, RewritingSystem, Rewriter};

/// Convenience alias for results carrying this crate's [`Error`].
pub type Result<T> = std::result::Result<T, Error>;
