pub mod chart;
pub mod classify;
pub mod config;
pub mod cone;
pub mod error;
pub mod fock;
pub mod grid;
pub mod index;
pub mod lattice;
pub mod linalg;
pub mod pspace;
pub mod rational;
pub mod runner;
pub mod scenario;
pub mod shiftrep;

pub use error::{Error, Result};
