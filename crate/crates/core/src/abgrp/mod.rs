//! Exact arithmetic of finitely generated abelian groups.
//!
//! Every group lives in invariant-factor form ([`FgAbGroup`]) and every
//! element in reduced canonical coordinates ([`GroupElement`]), so equality of
//! groups and of elements is structural. All arithmetic is on [`BigInt`].
//!
//! [`BigInt`]: num_bigint::BigInt

mod extension;
mod group;
mod linsolve;
mod matrix;
mod snf;
mod subgroup;
mod tensor;

pub use extension::{check_exact, sequence_splits, SplitDecision};
pub use group::{FgAbGroup, GroupElement, Homomorphism};
pub use linsolve::{integer_kernel, solve_integer, solve_mixed_congruences, CongruenceSolution};
pub use matrix::IntMatrix;
pub use snf::{smith_decomposition, snf, SmithForm};
pub use subgroup::{canonicalize, hom_kernel, subgroup_quotient, Canonical, Quotient, Subgroup};
pub use tensor::{tensor_hom, tensor_with, TensorProduct};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AbGroupError {
    #[error("invalid invariant factors: {0}")]
    InvalidInvariants(String),
    #[error("expected {expected} coordinates, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is {rows}x{cols} but the map needs {target}x{domain}")]
    ShapeMismatch {
        rows: usize,
        cols: usize,
        target: usize,
        domain: usize,
    },
    #[error("homomorphism is not well defined on generator {generator}")]
    IllDefined { generator: usize },
    #[error("maps cannot be composed: target and source differ")]
    IncompatibleComposition,
    #[error("group is infinite")]
    NotFinite,
    #[error("group is too large to enumerate")]
    TooLarge,
    #[error("sequence is not short exact: {0}")]
    ExactnessViolated(String),
}
