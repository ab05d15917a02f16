//! Exact dense linear algebra over ℚ: matrices, canonical RREF, kernels and
//! subspace arithmetic.

mod matrix;
mod modular;
mod subspace;

pub use matrix::{dot, linear_combination, ExactMatrix, Vector};
pub use subspace::{inverse, is_direct_sum, kernel, rref, sum_all, Rref, Subspace};
