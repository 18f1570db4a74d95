//! Exact computations with bigraded chain complexes over `R = F2[U,V]/(UV)`,
//! the coefficient ring of the minus/local theory for knot lattice-style
//! invariants.
//!
//! The crate provides:
//!
//! * [`ring`] — arithmetic in `F2[U,V]` and in the quotient `R`;
//! * [`complex`] — bigraded complexes: validation, reduction, tensor
//!   products, the knot-like test;
//! * [`hat`] — the hat flavor: filtered complexes, vertically simplified
//!   bases, characteristic multi-sets computed two independent ways;
//! * [`standard`] — standard complexes `C(b1, ..., bn)` and their
//!   `phi_j`, `tau`, `epsilon` invariants;
//! * [`localequiv`] — local maps, local equivalence, and standard
//!   representatives found by bounded search;
//! * [`obstruction`] — non-realizability predicates for parameter prefixes,
//!   cross-checked by a brute-force lifting oracle over `F2[U,V]`;
//! * [`mazur`] — the intersection-point grading tables of the Mazur
//!   satellite diagram and the arrow constraints they impose;
//! * [`deduce`] — the constraint solver that recovers the local class of
//!   iterated Mazur satellites, step by step.
//!
//! Everything is exact integer/F2 arithmetic; no floats, no randomness.

pub mod complex;
pub mod deduce;
pub mod hat;
pub mod linalg;
pub mod localequiv;
pub mod mazur;
pub mod obstruction;
pub mod ring;
pub mod standard;

mod tower;

pub use complex::{BigradedComplex, Generator, ValidationReport};
pub use deduce::{DeductionInput, PhiMatrix, PipelineStep};
pub use hat::{CharMultiset, FilteredComplex, VerticalBasis};
pub use localequiv::LocalMap;
pub use mazur::{ConstraintSet, IntersectionTable};
pub use obstruction::{OracleOutcome, OracleReport, PrefixPattern};
pub use ring::{Bigrading, Monomial, RingElem, RingTag};
pub use standard::{StandardComplex, StandardParams};

use thiserror::Error;

/// Errors shared by the whole crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A text input failed to parse; `line` is 1-based.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    /// An operation received a complex over the wrong coefficient ring.
    #[error("ring mismatch: expected {expected}, got {got}")]
    RingMismatch { expected: RingTag, got: RingTag },
    /// An operation required a reduced complex (no unit differential entries).
    #[error("complex is not reduced: unit entry {from} -> {to}")]
    NotReduced { from: String, to: String },
    /// An operation required a valid complex and validation failed.
    #[error("invalid complex: {0}")]
    Invalid(String),
    /// `gr_u - gr_v` must be even for the Alexander grading to be integral.
    #[error("generator {0} has odd gr_u - gr_v; Alexander grading is not an integer")]
    OddGradingGap(String),
    /// The hat homology was required to have rank one and did not.
    #[error("total hat homology has dimension {0}, expected 1")]
    HomologyRankNotOne(usize),
    /// A tower-related operation needed a knot-like complex.
    #[error("complex is not knot-like: {0}")]
    NotKnotLike(String),
    /// Standard-complex parameters were malformed.
    #[error("invalid standard parameters: {0}")]
    BadParams(String),
    /// A deduction step did not have a unique survivor.
    #[error("deduction failed: {0}")]
    Deduction(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
