//! Exact semilinear algebra for unitary Dieudonné spaces and modules of
//! signature `(n-1, 1)`, their slopes, lattices, isogeny pairs and coweights.

pub mod automorphisms;
pub mod classify;
pub mod coweights;
pub mod dieudonne;
pub mod error;
pub mod fp;
pub mod json;
pub mod lattice;
pub mod limits;
pub mod matrix;
pub mod orbits;
pub mod pairs;
pub mod ring;
pub mod semilinear;
pub mod slopes;
pub mod smith;
pub mod strata;

pub use error::{Error, Result};
pub use matrix::{Mat, TwistedMap};
pub use ring::{Elem, Ring};
