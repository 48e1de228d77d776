//! Finite monoids, hypergraph monoids and identity checking.

pub mod error;
pub mod finmon;
pub mod hypergraph;
pub mod hypermon;
pub mod identities;
pub mod words;

pub use error::{Error, Result};
