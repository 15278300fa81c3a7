//! Discrete moments of `zeta'` at the nontrivial zeros of the Riemann zeta
//! function, together with the mollifier, mean-value and random-model
//! machinery used to bound them.

pub mod analytic;
pub mod arithmetic;
pub mod error;
pub mod mollifier;
pub mod moments;
pub mod random_model;
pub mod special;

pub use error::{Error, Result};
