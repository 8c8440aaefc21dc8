//! Simulation and inference toolkit for one-dimensional sticky diffusions.

pub mod config;
pub mod error;
pub mod estimate;
pub mod experiments;
pub mod kernel;
pub mod ks;
pub mod laplace;
pub mod path_model;
pub mod quad;
pub mod rng;
pub mod simulate;
pub mod special;
pub mod statistics;

pub use error::{Error, Result};
