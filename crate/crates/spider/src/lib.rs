//! File formats, the parallel verification harness and the command-line
//! driver built on `spider-core`.

pub mod cli;
pub mod format;
pub mod harness;
