//! Finite, dimension-truncated cartesian cubical sets: limits, exponentials and path
//! objects, uniform Kan structures, the free-fibration endofunctor and its iteration.

pub mod awfs;
pub mod cli;
pub mod cset;
pub mod cube;
pub mod doc;
pub mod expo;
pub mod fixtures;
pub mod kan;
pub mod error;

pub use error::{Error, Result};
