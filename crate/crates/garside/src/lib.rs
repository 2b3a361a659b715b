//! Computational engine for finitely generated Artin monoids.
//!
//! An Artin monoid is presented by a Coxeter matrix: generators (atoms) `S`
//! and, for each pair with a finite entry `m`, the length-preserving
//! relation `[a,b>^m = [b,a>^m` between the two alternating products. On top
//! of an exhaustive word-problem oracle this crate provides:
//!
//! * multiplication, cancellation, divisibility and divisor lattices
//!   ([`engine`], [`lattice`]);
//! * the greedy and Foata normal forms with their local characterizations
//!   ([`normalform`]);
//! * three ultrametrics (greedy, Foata, prefix) stored as exact dyadic
//!   exponents, with a seeded fuzzer for the inequalities relating them
//!   ([`metrics`]);
//! * endomorphism analysis: validation, the kill/survive atom partition,
//!   the letter-erasing projection, finite generating sets for the fixed-
//!   and periodic-point submonoids, derived Artin presentations for them,
//!   and the head-based contraction criterion ([`endo`]).
//!
//! Everything is exact. Searches carry explicit budgets ([`engine::Budget`])
//! and report resource exhaustion as an error distinct from any mathematical
//! answer. The `garside` binary exposes all of it on the command line.

pub mod cli;
pub mod endo;
pub mod engine;
pub mod error;
pub mod lattice;
pub mod metrics;
pub mod normalform;
pub mod presentation;
pub mod sample;

pub use endo::{
    atom_partition, contraction_check, fix_generators, fix_presentation, lemma13_crosscheck,
    per_generators, project_pi, AtomPartition, ContractionOutcome, ContractionVerdict,
    CrosscheckReport, Endomorphism, FixCase, FixPresentation, FixReport, Projection,
};
pub use engine::{Budget, Element, Engine};
pub use error::{Error, Result};
pub use lattice::{DeltaOutcome, ReducedCensus};
pub use metrics::{verify_inequalities, DyadicDistance, InequalityReport, Metric, Rank};
pub use normalform::{format_factors, FoataNF, GreedyNF};
pub use presentation::{ArtinPresentation, Atom, PresentationClass};
pub use sample::{random_word, SplitMix64, DEFAULT_SEED};
