//! Explicit bounds on kissing numbers and closed-geodesic counts of closed
//! hyperbolic manifolds, from the Selberg trace formula.
//!
//! [`bounds`] evaluates the bounds and their constants. [`transform_pairs`]
//! and [`trace_kernels`] build the test functions they rest on, and
//! [`fuchsian`] enumerates length spectra of surface groups to test them
//! against. The guide in `book/` walks through each piece.

// `!(x > 0.0)` rejects NaN along with non-positive values
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod cli;
pub mod error;
pub mod fuchsian;
pub mod geometry;
pub mod numerics;
pub mod plancherel;
pub mod report;
pub mod trace_kernels;
pub mod transform_pairs;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/transform-pairs.md")]
    mod transform_pairs {}
    #[doc = include_str!("../../../book/src/kernels.md")]
    mod kernels {}
    #[doc = include_str!("../../../book/src/constants.md")]
    mod constants {}
    #[doc = include_str!("../../../book/src/holonomy.md")]
    mod holonomy {}
    #[doc = include_str!("../../../book/src/spectra.md")]
    mod spectra {}
    #[doc = include_str!("../../../book/src/counting.md")]
    mod counting {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
    #[doc = include_str!("../../../README.md")]
    mod readme {}
}
