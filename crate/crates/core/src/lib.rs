//! Measure-free probability on finite Stone spaces.
//!
//! An order complete vector lattice with weak unit is modelled as the
//! extended-real functions on a finite discrete space. On such a space the
//! Daniell functional calculus, conditional expectations, discrete stopping
//! times and stopped processes all reduce to exactly checkable pointwise
//! identities, and the [`harness`] checks them on seeded random instances.

pub mod error;
pub mod harness;
pub mod lattice;
pub mod mutation;
pub mod probability;
pub mod spectral;
pub mod stopping;

mod json;

pub use error::{Error, Result};
pub use lattice::{sup_family, BandProjection, ClopenSet, LatticeElement, StoneSpace, Tolerance};
