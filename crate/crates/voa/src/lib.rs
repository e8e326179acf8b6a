//! Exact computer algebra for free-field vertex algebras.
//!
//! The crate implements, with exact Q(i) arithmetic throughout:
//!
//! - mode algebra and Fock modules for the free fields `b`, `c` (fermionic,
//!   weights 0 and 1), `beta`, `gamma` (bosonic ghosts) and a weight-1
//!   Heisenberg current `j` ([`fock`]);
//! - Wick-theorem operator product expansions, normal products and residue
//!   mode actions for normally ordered composites of those fields ([`wick`]);
//! - the Lie algebra of differential operators on the circle with its
//!   2-cocycle central extension, and its free-field realization on the
//!   beta-gamma Fock space with central charge -1 ([`dhat`]);
//! - Heisenberg vertex operators, the bosonization of the beta-gamma system
//!   inside bc (x) Heisenberg, and the rewriting of beta-gamma currents in
//!   terms of the bc stress tensor, a weight-3 current and the Heisenberg
//!   field ([`boson`]);
//! - the W3 algebra at central charge -2 realized in bc fields, with
//!   commutation-relation checks, singular-vector scans and truncated
//!   non-splitness certificates ([`w3`]);
//! - triple-graded characters (charge, energy, cubic grading) and the product
//!   formulas they satisfy ([`characters`]).
//!
//! Everything is checked two ways where possible: symbolic identities of
//! composite fields on one side, and direct mode-by-mode action on Fock basis
//! states on the other. The `verify` CLI (see the `voa` binary) packages the
//! checks into named suites emitting deterministic JSON reports.

pub mod boson;
pub mod characters;
pub mod dhat;
pub mod fock;
pub mod linalg;
pub mod parse;
pub mod report;
pub mod scalar;
pub mod series;
pub mod suites;
pub mod w3;
pub mod wick;

pub use fock::{Field, FockState, GradedSpace, Mode, Monomial, Sector};
pub use scalar::Scalar;
pub use series::CharacterSeries;
pub use wick::{CompositeField, OpeResult};

use std::fmt;

/// Crate-wide error type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    DivisionByZero,
    /// Expression syntax error with a byte offset into the input.
    Parse { pos: usize, msg: String },
    UnknownSpace(String),
    /// A composite field whose monomials do not share one conformal weight.
    NonHomogeneous(String),
    /// Vertex-operator moding would leave the integer lattice.
    NonIntegralModing(String),
    ModeOutOfWindow(String),
    TruncationMismatch(String),
    SingularSystem(String),
    InvalidConfig(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DivisionByZero => write!(f, "division by zero"),
            Error::Parse { pos, msg } => write!(f, "syntax error at byte {pos}: {msg}"),
            Error::UnknownSpace(s) => write!(f, "unknown space label: {s}"),
            Error::NonHomogeneous(s) => write!(f, "field is not homogeneous: {s}"),
            Error::NonIntegralModing(s) => write!(f, "non-integral moding: {s}"),
            Error::ModeOutOfWindow(s) => write!(f, "mode outside configured window: {s}"),
            Error::TruncationMismatch(s) => write!(f, "truncation mismatch: {s}"),
            Error::SingularSystem(s) => write!(f, "singular linear system: {s}"),
            Error::InvalidConfig(s) => write!(f, "invalid configuration: {s}"),
        }
    }
}

impl std::error::Error for Error {}
