//! Quiver representations over a finite prime field.

mod hom;
mod names;
mod quiver;
mod rep;
mod subrep;
mod table;

pub use hom::{Fingerprint, HomIter, HomSpace, IsoDecision, DEFAULT_ENUMERATION_CAP};
pub use names::ClassNames;
pub use quiver::{Arrow, Quiver};
pub use rep::{Morphism, RepCategory, Representation};
pub use subrep::{dim_vectors_below, Subrep, SubrepIter};
pub use table::{
    bounded_dim_vectors, gl_order, EnumerationLimits, IsoClass, IsoClassId, IsoClassTable,
};
