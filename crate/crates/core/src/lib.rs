//! Spectral quantities of compact Neumann quantum graphs from finite
//! pseudo-orbit expansions, each paired with a matrix-based check.

pub mod charpoly;
pub mod cli;
pub mod error;
pub mod graph;
pub mod numeric;
pub mod orbits;
#[cfg(test)]
mod properties;
pub mod quadrature;
pub mod scattering;
pub mod secular;
pub mod spectrum;
pub mod statistics;
pub mod verify;
pub mod zeta;

pub use error::{Error, Result};
