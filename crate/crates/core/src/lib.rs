//! Exact symbolic toolkit for post-Lie algebra structures.
//!
//! Finite-dimensional Lie algebras are represented by structure constants
//! over sparse multivariate polynomials with exact rational coefficients.
//! On top of that sit the affine hull aff(h) = h x| Der(h), embeddings and
//! the post-Lie algebra structures they induce, and the nilpotency-based
//! completeness criteria, all decided symbolically. A bundled catalog of
//! worked structures exercises every check end to end.

pub mod aff;
pub mod catalog;
pub mod cli;
pub mod error;
pub mod io;
pub mod jordan;
pub mod lie;
pub mod linalg;
pub mod matrix;
pub mod parse;
pub mod plas;
pub mod poly;
pub mod rational;
pub mod symbols;
pub mod unipoly;

pub use error::{Error, Result};
