//! Exact rational scalars and dense linear algebra.
//!
//! Everything downstream (flag subspaces, parabolic constraint systems, fiber
//! maps) is expressed through [`Rational`] and [`RatMatrix`]. Two elimination
//! routes are provided: a fraction-free integer elimination used for ranks,
//! and a rational Gauss-Jordan reduction used when an explicit kernel basis is
//! needed. They are cross-checked against each other in the tests.

mod matrix;
mod rational;

pub use matrix::{rank_by_blocks, rank_and_kernel, solution_space_dim, RatMatrix, Rref};
pub use rational::Rational;
