//! Gaussian generating functionals on compact matrix quantum groups.

pub mod centrality;
pub mod cli;
pub mod convolution;
pub mod error;
pub mod gaussian;
pub mod json;
pub mod kernel;
pub mod sample;
pub mod targets;
pub mod wordlang;
pub mod words;

pub use error::{Error, Result};
