//! Finite models for single-variable observational languages, physical
//! propositions, and the Hilbert-space quantum logic of closed subspaces.
//!
//! The linear-algebra layer is generic over [`Scalar`]; the exact Gaussian
//! rationals ([`ExactComplex`]) are the default for every decision procedure
//! and `Complex64` is available for quick numerical work.

pub mod bridge;
pub mod error;
pub mod formula;
pub mod gen;
pub mod lattice;
pub mod model;
pub mod propositions;
pub mod quotient;
pub mod scalar;
pub mod subspace;

pub use bridge::{build_model, LoadedModel, QTruthValue, QmModel, QmSpec};
pub use error::{Error, Result};
pub use formula::{parse, render, ConnectiveFamily, Formula, LanguageTag, PredicateId};
pub use lattice::{QLattice, DEFAULT_CLOSURE_CAP};
pub use model::{Model, Signature, StateId, StateSet};
pub use propositions::{physical_proposition, testable, PhysicalProposition, Scope};
pub use scalar::{ExactComplex, Rational, Scalar};
pub use subspace::{born, Subspace};

pub use num_complex::Complex64;

pub type ExactSubspace = Subspace<ExactComplex>;
pub type FloatSubspace = Subspace<Complex64>;
pub type ExactLattice = QLattice<ExactComplex>;
pub type FloatLattice = QLattice<Complex64>;
