//! Computation of the Harder-Narasimhan stratification index set of the
//! flag variety attached to an isocrystal with given Newton and Hodge
//! vectors: enumeration of the strata with their HN-vectors and polygons,
//! and an independent decision procedure for realizable HN-vectors via
//! partition witnesses, cross-checked against the enumeration.

pub mod error;
pub mod gen;
pub mod isocrystal;
pub mod perm;
pub mod polygon;
pub mod rational;
pub mod strata;
pub mod witness;

pub use error::{Error, Result};
