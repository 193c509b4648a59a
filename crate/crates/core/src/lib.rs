//! Complementary Ramsey numbers: exact solvers, bound derivations, factorization
//! certificates and exhaustive searches.

pub mod bounds;
pub mod colorings;
pub mod error;
pub mod factorizations;
pub mod graphs;
pub mod search;
pub mod tables;
pub mod turan;

pub use error::{Error, Result};
