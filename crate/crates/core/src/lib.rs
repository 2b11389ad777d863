//! Antipodal two-weight rank-metric codes over finite field extensions,
//! the t-spreads they induce, and their expansions to Hamming-metric codes.
//!
//! Everything is exact and enumeration-based: weight distributions,
//! spreads and equivalences are computed by exhaustive search under an
//! explicit budget.

pub mod error;
pub mod field;
pub mod linalg;
pub mod rank;
pub mod atw;
pub mod spreads;
pub mod hamming;
pub mod format;
pub mod search;

pub use error::{Error, Result};
pub use field::{Elem, Embedding, Extension, Field, FieldElement};
pub use linalg::{Mat, Subspace};
pub use rank::{QSystem, RankCode, WeightDistribution};
