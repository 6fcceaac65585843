use thiserror::Error;

use crate::relax::NonExtendable;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("labelings have different lengths ({left} vs {right})")]
    LengthMismatch { left: usize, right: usize },

    #[error("label 0 is not allowed here (operation is defined on [k]^n only)")]
    ZeroLabel,

    #[error("label {label} is out of range [0, {k}]")]
    LabelOutOfRange { label: u32, k: u32 },

    #[error("index {index} is out of range for a cube with {cells} cells")]
    IndexOutOfRange { index: usize, cells: usize },

    #[error("n and k must both be positive (got n={n}, k={k})")]
    InvalidShape { n: usize, k: u32 },

    #[error("cube [0,{k}]^{n} has {cells} cells, above the limit of {limit}")]
    SizeGuard { n: usize, k: u32, cells: u128, limit: u64 },

    #[error("infinite value where a finite one is required")]
    InfiniteArgument,

    #[error("labeling contains a zero label but the table is positive-only")]
    KindViolation,

    #[error("expected a {expected} table")]
    WrongKind { expected: &'static str },

    #[error("tables disagree on shape (n={left_n}, k={left_k} vs n={right_n}, k={right_k})")]
    ShapeMismatch { left_n: usize, left_k: u32, right_n: usize, right_k: u32 },

    #[error("table is not a relaxation of the given function at {at}")]
    NotARelaxation { at: String },

    #[error("no tight pair found for relaxed point {at}")]
    NoTightPair { at: String },

    #[error("maximality check is only defined for n = 2 (got n={n})")]
    NotBinary { n: usize },

    #[error("table has non-finite entries; maximization needs a finite-valued function")]
    NotFinite,

    #[error("epsilon must be positive")]
    NonPositiveEpsilon,

    #[error("instance is infeasible (optimum is +inf)")]
    Infeasible,

    #[error("constraint {}: {reason}", .position + 1)]
    BadConstraint { position: usize, reason: String },

    #[error("constraint {} has no k-submodular relaxation", .position + 1)]
    ConstraintNotExtendable { position: usize, witness: Box<NonExtendable> },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
