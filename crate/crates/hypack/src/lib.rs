//! Sphere-packing bounds in hyperbolic space, numerically.
//!
//! This crate implements and cross-checks the computable objects behind
//! lower bounds on ball-packing densities in m-dimensional hyperbolic
//! space:
//!
//!  * [`hypgeo`] — the hyperboloid model: points, the Minkowski form,
//!    distances, geodesics, uniform sampling in balls, the law of cosines,
//!    and the two-ball intersection radius;
//!  * [`volumes`] — ball volumes and volume ratios, entirely in log space,
//!    valid for dimensions far beyond floating-point range;
//!  * [`bounds`] — the threshold function gamma, its root tau, the derived
//!    degree/intensity parameters Delta and lambda, the trivial covering
//!    bound, the improved lower bound, the m = 2 local density bound, and
//!    the spherical-code upper bound;
//!  * [`packing`] — a desk-scale Poisson -> prune -> independent-set
//!    packing construction in a bounded region, with density estimation
//!    and empirical checks of the Mecke identity and the Poisson tail
//!    bound.
//!
//! A narrative guide with runnable examples lives in `book/`; the same
//! snippets compile as doc-tests of this crate.

// Guards are written `!(x > 0.0)` on purpose: the negation rejects NaN,
// which `x <= 0.0` would let through.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod error;
pub mod hypgeo;
pub mod logspace;
pub mod packing;
pub mod volumes;

pub use error::{Error, Result};
pub use logspace::LogReal;

#[cfg(doctest)]
mod book;
