//! Association schemes on the quotients Z[i]/αZ[i] of the Gaussian integers.
//!
//! The relations are the orbitals of the rotations ⟨i⟩ acting together with
//! the translations of the quotient. The crate computes the schemes and their
//! intersection numbers, decides primitivity, forms quotient schemes,
//! exposes the block-circulant structure and character-sum eigenvalues of
//! the relation matrices, classifies the tilings of Z² by the sublattices
//! αZ[i], and provides the Mannheim-metric constellations over the quotients.

pub mod cli;
pub mod coding;
pub mod gaussian;
pub mod quotient_ring;
pub mod quotient_scheme;
pub mod scheme;
pub mod snf;
pub mod sweep;
pub mod tiling;

pub use gaussian::{GaussError, GaussInt};
pub use quotient_ring::{PointOrdering, QuotientRing, Residue, RingError};
pub use scheme::{AssociationScheme, OrbitalScheme, RelationTable, SchemeError};
