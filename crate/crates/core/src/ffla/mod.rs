//! Exact linear algebra over prime fields `F_q`.
//!
//! Everything in the crate that counts morphisms, automorphisms or
//! subobjects bottoms out here. Matrices are dense and row-major; all
//! dimensions at desk scale are tiny.

mod field;
mod matrix;
mod subspace;

pub use field::Field;
pub use matrix::{linear_solve, FqMatrix, Solution};
pub use subspace::{gaussian_binomial, Subspaces};
