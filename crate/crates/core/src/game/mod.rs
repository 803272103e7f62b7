//! Finite normal-form games with exact rational payoffs.

mod asymmetric;
pub mod genericity;
pub mod multiset;
pub mod named;
mod symmetric;

pub use asymmetric::{AsymmetricEntry, AsymmetricGame};
pub use symmetric::{PayoffEntry, SymmetricGame};
