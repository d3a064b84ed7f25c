//! Exact construction of the spanning tree graph of a weighted digraph, and
//! machinery to check the algebraic identities relating the two graphs.
//!
//! The crate is `no_std` and only needs `alloc`. Scalars are exact: either
//! arbitrary-precision rationals or sparse multivariate polynomials with
//! rational coefficients, both exposed through the [`algebra::Ring`] trait.
//!
//! Layout:
//!
//! * [`algebra`]: rationals, polynomials, matrices, determinants, power series.
//! * [`graph`] and [`walks`]: digraphs, vertex sets, strongly connected subsets,
//!   closed walk bookkeeping.
//! * [`arborescence`]: spanning tree and forest enumeration, Laplacians.
//! * [`lift`]: the spanning tree graph and its matrices.
//! * [`theorem`]: the exponent table, the exploration algorithm and the
//!   identity checks built on top of everything else.

#![no_std]

extern crate alloc;

#[cfg(test)]
#[macro_use]
extern crate std;

pub mod algebra;
pub mod arborescence;
mod error;
pub mod graph;
pub mod lift;
pub mod policy;
pub mod theorem;
pub mod walks;

pub use error::{Error, Result};
