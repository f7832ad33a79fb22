pub mod bench;
pub mod circuit;
pub mod error;
pub mod preprocessing;
pub mod profiler;
pub mod ring;
pub mod rng;
pub mod runtime;
pub mod sharing;
pub mod workload;

pub use error::{Error, Result};
