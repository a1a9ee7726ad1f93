//! Representation zeta functions of self-similar branched groups.
//!
//! The crate is `no_std` (with `alloc`). Finite groups are handled through
//! explicit element enumeration: every group carries a multiplication on
//! element indices `0..order`, with `0` the identity.

#![no_std]
#![allow(clippy::needless_range_loop, clippy::too_many_arguments, clippy::type_complexity)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod analytic;
pub mod branch;
pub mod character;
pub mod cohomology;
pub mod dirichlet;
pub mod error;
pub mod field;
pub mod funceq;
pub mod group;
pub mod hom;
pub mod linalg;
pub mod perm;
pub mod poly;
pub mod rep;
pub mod snf;
pub mod subgroups;
pub mod triples;
pub mod wreath;

pub use error::{Error, Result};
