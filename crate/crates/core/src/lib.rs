#![no_std]
extern crate alloc;

pub mod dynamics;
pub mod error;
pub mod game;
pub mod kernel;
pub mod linalg;
pub mod oracle;
pub mod pd;
pub mod quadrature;
pub mod rational;
pub mod sim;
pub mod stability;

pub use error::{BepError, Result, SchemaError};
pub use game::{AsymmetricEntry, AsymmetricGame, PayoffEntry, SymmetricGame};
pub use kernel::{MultiPopulationState, PayoffDistribution, PopulationState, TieRule};
pub use rational::Rational;
