//! Exact computation of the nucleus of the Johnson graph J(N,D).
//!
//! The crate builds J(N,D) over a colex-ordered vertex set, its Bose–Mesner
//! data (distance matrices, eigenvalues, primitive idempotents, Krein
//! parameters), the dual data for a base vertex, and the nucleus
//! `𝒩 = 𝒩_0 ⊕ … ⊕ 𝒩_D`. Every identity is checked in exact rational
//! arithmetic; [`report`] runs the whole battery for one instance.

pub mod bases;
pub mod bose_mesner;
pub mod combinatorics;
pub mod dual;
pub mod error;
pub mod linalg;
pub mod nucleus;
pub mod rational;
pub mod report;
pub mod subconstituent;

pub use error::{Error, Result};
pub use rational::Rational;
