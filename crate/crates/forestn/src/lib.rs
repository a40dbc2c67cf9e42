//! Two-way n-ary forest diagrams for the Brown-Thompson groups F(n).
//!
//! Elements of F(n) are represented by a pair of pointed n-ary forests over a
//! shared window of leaf columns ([`ForestDiagram`]). On top of that
//! representation the crate provides:
//!
//! - exact word length via marked-space labelling and a weight table
//!   ([`metric`]),
//! - geodesic word synthesis and dead-end detection ([`geodesic`]),
//! - brute-force certification against breadth-first search over the Cayley
//!   graph ([`oracle`]),
//! - an exact realization as piecewise-linear homeomorphisms of the real line
//!   with n-adic breakpoints ([`plmap`]).

pub mod forest;
pub mod geodesic;
pub mod metric;
pub mod oracle;
pub mod plmap;
pub mod word;

pub use forest::{ForestDiagram, Letter, NaryTree};
pub use word::Word;

use thiserror::Error;

/// Crate-wide error type.
#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("arity must be at least 2, got {0}")]
    InvalidArity(usize),
    #[error("generator index {index} out of range for arity {arity}")]
    BadGenerator { index: usize, arity: usize },
    #[error("arity mismatch: {0} vs {1}")]
    ArityMismatch(usize, usize),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("ball enumeration exceeded the cap of {cap} elements")]
    BallCapExceeded { cap: usize },
    #[error("element is not a dead end")]
    NotDeadEnd,
    #[error("no descent step from the identity")]
    IdentityDescent,
    #[error("unlabelled space has no weight")]
    UnlabelledWeight,
}

pub type Result<T> = std::result::Result<T, Error>;
