//! Covers of sofic shift spaces: labelled graphs, predecessor languages,
//! the past set / Krieger / Fischer / generalized Fischer / multiplicity
//! covers and their layer structure, plus the flow-invariant proper
//! communication graph and the combinatorial ideal lattice.
//!
//! A sofic shift is given here as a finite essential [`LabelledGraph`].
//! Everything else is derived: [`covers`] builds the canonical covers,
//! [`invariants`] computes flow invariants over them, and [`construct`]
//! synthesizes presentations realizing a prescribed invariant.

mod bitset;
mod error;

pub mod construct;
pub mod covers;
pub mod dot;
pub mod format;
pub mod graph;
pub mod invariants;
pub mod iso;
pub mod lang;
pub mod subset;

pub use error::{Error, Result};
pub use graph::{Alphabet, Edge, GraphId, LabelledGraph, Predicates, Scc, VertexSet};

pub use covers::{CoverKind, CoverResult, VertexFlags, VertexInfo};
pub use invariants::{Digraph, IdealLattice, ProperCommunicationGraph};
pub use lang::{DeterministicAcceptor, PredecessorClassKey};
pub use subset::{MonoidExploration, ReachableSubsets, TransitionRelation};
