//! Chow rings of relative Fulton–MacPherson compactifications of projective
//! space along a linear subspace, computed two independent ways:
//!
//! 1. as finitely presented graded quotient rings, with ranks by degree read
//!    off from Groebner bases (the presentation route);
//! 2. as chain- and nest-indexed sums of shifted Chow groups of product
//!    strata (the decomposition route).
//!
//! The [`verify`] module cross-checks the two routes degree by degree; the
//! `relfm` binary exposes the same operations on the command line.

pub mod algebra;
pub mod combinatorics;
pub mod decomposition;
pub mod error;
pub mod geometry;
pub mod presentation;
pub mod verify;

pub use error::{Error, Result};
