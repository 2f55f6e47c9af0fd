//! Exact Lie-bialgebra calculus on inhomogeneous orthogonal Lie algebras.
//!
//! The crate provides exact polynomial coefficients ([`scalar`]), rational
//! linear algebra ([`linalg`]), Lie algebras from structure constants
//! ([`lie`]), multivectors up to degree 3 ([`exterior`]), the Schouten
//! bracket and Yang–Baxter verdicts ([`schouten`]), invariant and cocycle
//! spaces ([`cohomology`]), the inhomogeneous o(p,q) algebras and their
//! named elements ([`poincare`]), normalizing automorphisms
//! ([`automorphisms`]) and a data-driven catalog of r-matrices
//! ([`catalog`]).

// Structure constants and matrices are indexed in several arrays at once.
#![allow(clippy::needless_range_loop)]

pub mod automorphisms;
pub mod catalog;
pub mod cohomology;
pub mod error;
pub mod exterior;
pub mod format;
pub mod lie;
pub mod linalg;
pub mod poincare;
pub mod scalar;
pub mod schouten;

pub use error::{Error, Result};
pub use exterior::{Form, GradedComponents2, GradedComponents3, MultiVector};
pub use lie::{LieAlgebra, LinearMap, Metric};
pub use linalg::Subspace;
pub use scalar::Scalar;
