//! Exact computation of associated positive systems and transversal-slice
//! invariants for Weyl group conjugacy classes.

pub mod exact_scalar;
pub mod linalg;
pub mod root_system;
pub mod weyl;
pub mod assoc_positive;
pub mod slice_invariants;
pub mod strata_classical;

use thiserror::Error;

/// Default location of the bundled data files.
pub const DEFAULT_DATA_DIR: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/data");

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AtlasError {
    #[error("unsupported rank: {0}")]
    UnsupportedRank(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("data error: {0}")]
    Data(String),
    #[error("not a simple system: {0}")]
    NotSimpleSystem(String),
    #[error("invalid Carter pair: {0}")]
    InvalidPair(String),
    #[error("inconsistent decomposition: {0}")]
    Inconsistent(String),
    #[error("no admissible generic element: {0}")]
    NoSector(String),
    #[error("domain violation: {0}")]
    Domain(String),
    #[error("not a signed permutation")]
    NotSignedPermutation,
}
