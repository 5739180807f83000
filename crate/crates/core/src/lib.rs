//! Affine Grassmann codes over small finite fields.
//!
//! The crate builds the codes C^A(ℓ, m; h) by evaluating minors of a generic
//! ℓ×ℓ' matrix at every point of the affine space of ℓ×ℓ' matrices over
//! GF(q), computes exact generalized Hamming weights by exhaustive search,
//! and implements the closed-form weight formulas for these codes and their
//! duals.

pub mod code;
pub mod error;
pub mod field;
pub mod formulas;
pub mod hierarchy;
pub mod minors;
pub mod par;

pub use code::{LinearCode, Matrix, Subcode};
pub use error::{Error, Result};
pub use field::{Elem, Field};
pub use hierarchy::{SearchOptions, WeightHierarchy};
pub use minors::{CodeParams, MatrixPoint, MinorIndex};
pub use par::Execution;
