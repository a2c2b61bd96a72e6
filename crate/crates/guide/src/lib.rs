//! Runs the code listings in `book/src` as doctests, since mdbook cannot
//! link against workspace crates on its own.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/spaces.md")]
pub mod spaces {}

#[doc = include_str!("../../../book/src/alignment.md")]
pub mod alignment {}

#[doc = include_str!("../../../book/src/topology.md")]
pub mod topology {}

#[doc = include_str!("../../../book/src/sequences.md")]
pub mod sequences {}

#[doc = include_str!("../../../book/src/fixed-points.md")]
pub mod fixed_points {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
