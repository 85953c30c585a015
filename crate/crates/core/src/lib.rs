//! Decides, from exact integer homological certificates, when a finitely
//! presented group admits representations into SU(2)/SO(3) with prescribed
//! values, and numerically constructs witness representations.
//!
//! The crate is organized around the pipeline:
//! [`words`] (free-group core) → [`zlinalg`] (exact integer algebra) →
//! [`homology`] (certificates over the presentation 2-complex) →
//! [`liegrp`] (quaternion numerics and degree formulas) →
//! [`solver`] (witness construction and verification).

pub mod homology;
pub mod liegrp;
pub mod presfile;
pub mod report;
pub mod solver;
pub mod words;
pub mod zlinalg;
