//! Sp(1) ≅ SU(2) and SO(3) numerics: unit quaternions, the covering map,
//! word-map evaluation with right-trivialized differentials, and the
//! mapping-degree formula with its empirical verification at rank one.

mod degree;
mod quat;
mod word_map;

pub use degree::{degree_formula, empirical_degree, DegreeOutcome};
pub use quat::{covering_map, lift_rotation, random_unit_quat, Quat, QTuple, Rot3, TangentVector};
pub use word_map::{so3_word_eval, word_differential, word_eval};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum LieError {
    #[error("word rank {word_rank} does not match tuple length {tuple_len}")]
    RankMismatch { word_rank: usize, tuple_len: usize },
    #[error("quaternion norm {norm} too far from 1")]
    NotUnit { norm: f64 },
    #[error("expected {expected} words, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("word must be nontrivial in abelianization")]
    TrivialWord,
}

/// Central tolerance ledger for all floating-point comparisons.
#[derive(Debug, Clone, Copy)]
pub struct Tolerances {
    /// Allowed unit-norm drift after renormalization.
    pub norm_drift: f64,
    /// Newton convergence threshold on residual norms.
    pub newton: f64,
    /// Success threshold on max constraint residual.
    pub success: f64,
    /// Distance under which two solutions are considered equal.
    pub dedup: f64,
    /// Threshold for snapping values to ±1.
    pub snap: f64,
    /// Smallest singular value below which a target counts as near-singular.
    pub singular: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            norm_drift: 1e-12,
            newton: 1e-10,
            success: 1e-9,
            dedup: 1e-6,
            snap: 1e-6,
            singular: 1e-4,
        }
    }
}
