//! File formats, experiment drivers and parallel searches on top of `bsa-core`.

pub mod analysis;
pub mod equi;
pub mod error;
pub mod io;
pub mod parallel;
pub mod signature;
pub mod triads;

pub use error::{Error, Result};
