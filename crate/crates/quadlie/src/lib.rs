//! Exact-arithmetic toolkit for finite-dimensional quadratic Lie superalgebras.
//!
//! Everything is computed over the rationals, optionally extended by a single
//! square root `sqrt(d)` per computation. There are no floats anywhere: every
//! validation, construction and decomposition is an exact yes/no with a witness.
//!
//! The main layers, bottom up:
//!
//! * [`scalar`] – exact field elements and the quadratic-extension context;
//! * [`matrix`] – dense exact linear algebra (RREF, kernels, Bareiss determinants);
//! * [`space`] – super vector spaces, graded subspaces, homogeneous linear maps;
//! * [`algebra`] – Lie superalgebras from structure constants, ideals, series,
//!   representations;
//! * [`form`] – invariant scalar products, orthogonality, the invariant-form space;
//! * [`cochain`] – scalar Chevalley–Eilenberg cochains in low degree and the
//!   supercyclic correspondence;
//! * [`extend`] – semidirect products, generalized/classical double extensions,
//!   T*-extensions and odd-line extensions;
//! * [`decompose`] – the inverse constructions: context extraction from isotropic
//!   ideals, orthogonal splitting, isotropic submodules, the solvable-to-T* pipeline;
//! * [`catalog`] – named example algebras used as fixtures;
//! * [`doc`] – canonical text documents for algebras, cocycles, contexts, modules;
//! * [`cli`] – the command-line driver.

pub mod algebra;
pub mod catalog;
pub mod cli;
pub mod cochain;
pub mod decompose;
pub mod doc;
pub mod extend;
pub mod form;
pub mod matrix;
pub mod report;
pub mod scalar;
pub mod space;

pub use algebra::{Representation, SuperAlgebra};
pub use form::{GramForm, QuadraticSuperAlgebra};
pub use report::{Check, Report};
pub use scalar::{FieldCtx, Rational, Scalar};
pub use space::{LinearMap, Parity, Subspace, SuperSpace};

use thiserror::Error;

/// Errors shared across the library layers.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("vector is not homogeneous")]
    NotHomogeneous,
    #[error("subspace is not graded")]
    NotGraded,
    #[error("{0} is not an ideal")]
    NotAnIdeal(String),
    #[error("field extension required: {d}")]
    FieldExtensionRequired { d: i64 },
    #[error("incompatible field extensions: sqrt({active}) is active but sqrt({needed}) is needed")]
    IncompatibleExtension { active: i64, needed: i64 },
    #[error("simple submodule not computable over the active field: {0}")]
    SimpleSubmodule(String),
    #[error("validation failed: {0}")]
    Validation(String),
    #[error("{0}")]
    Other(String),
}

pub type Result<T> = std::result::Result<T, Error>;
