//! Instances by name, JSON formats, the parallel audit runner and the
//! command-line driver around `loopbv-core`.

pub mod audit;
pub mod cli;
pub mod instance;
pub mod json;
pub mod render;

pub use loopbv_core;
