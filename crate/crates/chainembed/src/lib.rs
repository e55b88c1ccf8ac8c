//! Std companion of [`chainembed_core`]: file IO, the environment
//! protocol server, the multi-threaded exploration runner and benchmarks.

pub mod bench;
mod error;
pub mod explore;
pub mod io;
pub mod protocol;

pub use chainembed_core as core;
pub use error::{Error, Result};
