//! Discrete Radon-type operators and the arithmetic machinery behind their
//! maximal estimates: canonical polynomial lifting, averaging and truncated
//! singular operators, Weyl and Gauss sums, Ionescu-Wainger rational sets,
//! the Rademacher-Menshov dyadic inequality and lattice-point counting.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod arithmetic;
pub mod error;
pub mod expsums;
pub mod geometry;
pub mod kernels;
pub mod lattice;
pub mod maximal;
pub mod numtheory;
pub mod operators;
pub mod quadrature;
pub mod rng;
pub mod table;
pub mod verify;

pub use error::{Error, Result};
