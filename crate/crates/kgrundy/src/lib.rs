//! Exact combinatorics for k-Grundy domination and k-forcing on finite
//! simple graphs.
//!
//! The crate computes the four k-Grundy domination numbers (plain, total,
//! Z, and L), the k-forcing number, constructive witness sequences for the
//! families where closed forms are known, and bound/conjecture audits over
//! graph streams. Everything is deterministic: same inputs, same seeds,
//! byte-identical outputs.
//!
//! Module map:
//! - [`graph`]: bitset-backed simple graphs, graph6 and edge-list formats.
//! - [`family`]: parametric generators (`cycle:9`, `kbipartite:4,3`, ...).
//! - [`sequence`]: legal-move engine for the four sequence variants.
//! - [`solver`]: exact values by memoized subset search.
//! - [`forcing`]: k-forcing closures, numbers, and derived Z-sequences.
//! - [`constructions`]: closed forms and witness builders.
//! - [`lab`]: bound audits and conjecture checks over instance streams.

pub mod constructions;
pub mod error;
pub mod family;
pub mod forcing;
pub mod graph;
pub mod lab;
pub mod sequence;
pub mod solver;

pub use error::{Error, Result};
pub use family::FamilySpec;
pub use graph::{Graph, GraphFormat};
pub use sequence::{GreedyRule, GrundySequence, Variant, VerifyOutcome, VerifyReport};
pub use solver::{SolveResult, SolverConfig};
