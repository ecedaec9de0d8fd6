//! Exact classification of trilinear singular Brascamp–Lieb data.
//!
//! A datum `(H; H₀..H₃; Π₀..Π₃)` is turned into its dual four-subspace module,
//! decomposed into indecomposable summands with exact rational arithmetic,
//! and matched against the known boundedness results. The `rotations` and
//! `numcheck` modules hold the floating-point side: Funk-transform spectra,
//! slice decompositions on S², kernel extension and form quadrature.
#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod classify;
pub mod decompose;
pub mod error;
pub mod exponents;
pub mod fixtures;
pub mod iso;
pub mod linalg;
pub mod module;
pub mod numcheck;
pub mod rng;
pub mod rotations;
pub mod tables;

pub use error::Error;
pub use linalg::{Matrix, Poly, Rational, Subspace};
pub use module::{Datum, DimVector, EquivalenceMap, FourModule};
