//! Exact invariants of F-crystals with reductive structure: Witt-vector
//! semilinear algebra, root-system combinatorics, Shimura types and the
//! p-divisible groups they carry.

pub mod catalog;
pub mod error;
pub mod modp;
pub mod roots;
pub mod types;
pub mod witt;

pub use error::{Error, Result};
