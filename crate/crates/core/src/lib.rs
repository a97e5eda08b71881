//! Patchwork constructions for multivariate quasi-copulas.
//!
//! A quasi-copula is a function on the unit cube that is grounded, has 1 as
//! neutral element, and is increasing and 1-Lipschitz in each argument; unlike
//! a copula it may assign negative volume to boxes. This crate works with
//! tabulations of such functions on rectilinear grids and provides
//!
//! - axiom checks and signed n-box volumes ([`axioms`]),
//! - the boundary-value machinery on a rectangle: conditions on prescribed
//!   face functions, the additive patches `A`/`B` and their difference with
//!   its margins, a Sklar-type factorization, and sharp local patch bounds
//!   ([`patchwork`]),
//! - the inductive algorithm extending a sub-quasi-copula given on a product
//!   of finite unions of closed intervals to the largest and smallest
//!   quasi-copula extensions ([`extension`]),
//! - reference generators and a full numerical reproduction of the
//!   3-dimensional counterexample that rules out the bivariate multiplicative
//!   patch formula in higher dimensions ([`examples`]).

// indexed loops over several parallel arrays read better than zipped
// iterators here; negated comparisons are kept where they must reject NaN
#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

pub mod axioms;
mod error;
pub mod examples;
pub mod extension;
pub mod grid;
pub mod patchwork;
pub mod qgf;
pub mod report;

pub use error::{Error, Result};
pub use grid::{corner_point, CornerIndex, GridFunction, Mesh, NBox};
pub use report::{CheckReport, Violation, ViolationKind};
