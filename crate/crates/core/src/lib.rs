//! Mining EL⊥ concept inclusion bases from finite interpretations.
//!
//! The pipeline: an [`Interpretation`] is turned into its description
//! graph, model-based most specific concepts are computed at an adaptable
//! role depth ([`mmsc`]), an attribute set and its closed sets are
//! enumerated ([`miner`]), and the resulting TBox is checked with a
//! completion-based reasoner ([`reasoner`]).

pub mod concept;
pub mod error;
pub mod fixtures;
pub mod graph;
pub mod interpretation;
pub mod io;
pub mod miner;
pub mod mmsc;
pub mod mvf;
pub mod reasoner;
pub mod simulation;
pub mod syntax;
pub mod testkit;

pub use concept::{Axiom, Concept, ConceptInclusion, ConceptKind, Interner, Name, RawConcept, Signature, TBox};
pub use error::{Error, Result};
pub use graph::{DescriptionGraph, DescriptionTree, Vertex};
pub use interpretation::{Element, Interpretation};
pub use miner::{build_base, build_base_with, check_base_complete, check_base_sound, CompletenessReport, MiningMode, MiningReport};
pub use mmsc::{Branch, DepthReport, Limits, MmscEngine};
pub use reasoner::Reasoner;
pub use syntax::{parse_axiom, parse_concept, parse_inclusion};
