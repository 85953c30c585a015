//! Exact integer linear and exterior algebra: Smith normal form with
//! transformation matrices, integer kernels, and sparse multivectors in
//! `Λᵏℤⁿ`. No floating point anywhere in this module.

mod exterior;
mod matrix;

pub use exterior::ExteriorElement;
pub use matrix::{kernel_basis, smith_normal_form, IntMatrix, SnfResult};

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("ambient rank mismatch: {left} vs {right}")]
    RankMismatch { left: usize, right: usize },
    #[error("degree {degree} does not match ambient rank {rank}")]
    DegreeMismatch { degree: usize, rank: usize },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
}
