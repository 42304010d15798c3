//! Random Betti tables: exact pure diagrams, uniformly sampled
//! Boij-Soderberg coefficient vectors, and the asymptotic experiments that
//! compare their entries with Gaussian profiles.

pub mod asymptotics;
pub mod cli;
pub mod combinatorics;
pub mod curves;
pub mod decomposition;
pub mod error;
pub mod io;
pub mod linalg;
pub mod report;
pub mod sampling;
pub mod svg;
pub mod tables;
pub mod weighted;

pub use error::{Error, Result};
