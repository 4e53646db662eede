//! Detection of topological obstructions to choosing smooth eigenvector
//! fields for Hermitian matrix-valued principal symbols on cosphere bundles.
//!
//! Symbols are evaluated pointwise ([`symcore`]), sampled on discretized
//! 2-cycles and bounding chains ([`probes`]), and reduced to Chern numbers
//! and a mod-2 torsion class ([`invariants`]). [`trivialize`] builds global
//! eigenvector fields independently as a cross-check, and [`report`] drives
//! runs and serializes results.

pub mod catalog;
pub mod error;
pub mod invariants;
pub mod probes;
pub mod quat;
pub mod report;
pub mod symcore;
pub mod trivialize;

pub use catalog::CatalogEntry;
pub use error::{Error, Result};
pub use invariants::{InvariantKind, InvariantReport, InvariantValue, Question, Verdict};
pub use probes::{CosphereGraph, LoopPath, ProbeSet, QuadCycleMesh, TorsionChain};
pub use symcore::{CovectorPoint, Geometry, HermitianMatrix, SpectralPoint, SymbolField, ValidationReport};
pub use trivialize::{Certificate, GaugeField, GaugeStatus};
