//! Multi-view brain hyperconnectome embedding.
//!
//! - [`data`]: connectivity matrices, cohorts, text I/O, synthetic cohorts
//! - [`hypergraph`]: k-NN hyperedges, stacked incidence, propagation operator
//! - [`numerics`]: dense matrices, gradient checking, Adam
//! - [`model`]: the adversarially regularized hypergraph autoencoder
//! - [`classify`]: linear SVM and the repeated split evaluation protocol
//! - [`cli`]: configuration and the `build` / `embed` / `evaluate` / `pipeline` commands

pub mod classify;
pub mod cli;
pub mod data;
pub mod error;
pub mod hypergraph;
pub mod model;
pub mod numerics;
pub mod seed;

pub use error::{Error, Result};
