//! Hyperbolic lattice point counting for the modular group and its congruence
//! subgroups, together with the spectral side of the counting problem:
//! the Selberg/Harish-Chandra transform of a ball, Maass and Eisenstein data,
//! averaged error terms and almost-periodic recurrence tools.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod almost_periodic;
pub mod error;
pub mod error_terms;
pub mod hypgeom;
pub mod lattice;
pub mod specfun;
pub mod spectral;

pub use error::{Error, Result};
pub use hypgeom::{GroupElement, Point};
pub use lattice::{GroupModel, OrbitProfile};
