//! Density-based topology optimization with explicit length-scale control.
//!
//! The crate is `no_std` and only needs an allocator. It provides the
//! building blocks (grids, neighborhood operators, projections, local volume
//! constraints, finite elements, the MMA update) and a robust optimization
//! loop that ties them together. File formats and the command line live in
//! the `lenscale` crate.

#![no_std]
#![forbid(unsafe_code)]
// `!(x > 0.0)` is used on purpose so NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

extern crate alloc;
#[cfg(test)]
#[macro_use]
extern crate std;

pub mod calibrate;
pub mod constraints;
pub mod error;
pub mod fem;
pub mod fields;
pub mod geometry;
pub mod grid;
pub mod neighborhoods;
pub mod optimizer;
pub mod problem;
pub mod verifier;

mod math;

pub use error::{Error, Result};
pub use fields::{Design, DesignTriple, ThresholdSet};
pub use grid::GridSpec;
pub use neighborhoods::{BoundaryTreatment, NeighborhoodOperator, RegionSpec};
pub use problem::{assemble_problem, OptProblem, Preset, RunConfig};
