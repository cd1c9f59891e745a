//! Sliced diagrams for the `SL_n` web spider and the cobweb spider, and the
//! state-sum map from webs to linear combinations of cobwebs.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod cobweb;
pub mod diagram;
pub mod scalar;
pub mod statesum;
pub mod verify;
pub mod web;
