//! Spectral clustering of stochastic block models by vanilla SVD, with the
//! numerical checks that accompany it.

// Negated comparisons reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod clustering;
pub mod error;
pub mod experiments;
pub mod graph_model;
pub mod linalg;
pub mod rng;

pub use error::{Error, Result};
