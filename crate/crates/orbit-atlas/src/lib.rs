//! Exact orbit counting for matrix groups acting on Grassmannians and flag
//! varieties over prime fields, together with the partition calculus and the
//! incidence-transform machinery that underpin the counting theorems.

pub mod cli;
pub mod error;
pub mod field;
pub mod incidence;
pub mod orbits;
pub mod partitions;
pub mod skeleton;
pub mod subspaces;

pub use error::{Error, Result};
