//! Exact computations for small-rank symplectic groups and their quartic covers:
//! nilpotent orbits and their gradings, characters on unipotent radicals, the
//! combinatorics of root exchange, cover lattices and tame symbols, and formal
//! Satake parameter transfer.
//!
//! Everything is exact: rationals are `BigRational`, lattices use integer
//! normal forms, and roots are integer vectors in the ε-basis.

pub mod cli;
pub mod cover;
pub mod dsl;
pub mod error;
pub mod exact;
pub mod exchange;
pub mod field;
pub mod filtration;
pub mod lattice;
pub mod orbits;
pub mod params;
pub mod rootsys;

pub use error::{Error, Result};
pub use exact::Rational;

/// Version tag carried by every JSON document.
pub const SCHEMA: &str = "sympcap/1";
