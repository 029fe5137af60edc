//! Exact Hall algebras of quiver representations over small prime fields.

pub mod complexes;
pub mod dhall;
pub mod error;
pub mod ffla;
pub mod format;
pub mod homalg;
pub mod mhall;
pub mod quiverrep;
pub mod scalar;
pub mod verify;

#[cfg(test)]
mod testutil;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// Default coefficient type: arbitrary-precision rationals.
pub type Rat = num_rational::BigRational;

/// `MH` / `MH_tw` elements over [`Rat`].
pub type MhElement = mhall::AlgebraElement<Rat>;

/// `DH` / `DH_tw` elements over [`Rat`].
pub type DhElement = dhall::DHElement<Rat>;

/// Reduced form of a complex over [`Rat`].
pub type RatReducedForm = complexes::ReducedForm<Rat>;
