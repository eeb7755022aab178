//! File formats, SQL execution, verification suites and parallel scoring
//! on top of `respo-core`.

pub mod cli;
pub mod error;
pub mod fixtures;
pub mod formats;
pub mod parallel;
pub mod sqlexec;
pub mod suites;
pub mod textio;

pub use error::{Error, Result};
