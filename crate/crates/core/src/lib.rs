//! Essential cyclicity of digraphs with ring structure.
//!
//! A digraph with ring structure on `n` vertices is a Hamiltonian cycle plus
//! any subset of the arcs of the opposite cycle. This crate decides exactly
//! which of them have a non-real Laplacian eigenvalue, computes their spectra
//! in closed form, and cross-checks every closed form against an independent
//! numeric pipeline (exact characteristic polynomials and Aberth–Ehrlich
//! root finding).
//!
//! Modules:
//! - [`poly`]: exact integer polynomials and extended-precision evaluation.
//! - [`polycore`]: the Chebyshev families `P_n`, `Z_n` and their root formulas.
//! - [`rootfind`]: the numeric oracle.
//! - [`ringgraph`]: the ring digraph model and its exact classifier.
//! - [`weighted`]: criteria for small weighted digraphs.
//! - [`arborescence`]: spanning in-arborescence counts.
//! - [`dynamics`]: consensus simulation linking complex spectra to oscillation.

#![forbid(unsafe_code)]

pub mod arborescence;
mod ddouble;
pub mod dynamics;
mod error;
pub mod matrix;
pub mod poly;
pub mod polycore;
pub mod ringgraph;
pub mod rootfind;
pub mod weighted;

pub use error::{Error, Result};
pub use matrix::{IntMatrix, RealMatrix, SquareMatrix};
pub use poly::IntPolynomial;
pub use ringgraph::{Classification, ClassificationCase, GapDecomposition, RingDigraph};
pub use rootfind::{ComplexRootSet, RootFinderConfig};

pub use num_complex::Complex64;
