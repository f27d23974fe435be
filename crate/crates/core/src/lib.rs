//! Exact-arithmetic engine for section-count growth and numerical-dimension
//! invariants of the pseudoeffective eigenclass on a rank-2 Calabi-Yau
//! threefold.
//!
//! The crate is organized around the computation pipeline:
//!
//! - [`qfield`]: exact arithmetic in Q(√2), the substrate for everything else;
//! - [`lattice`]: the rank-2 Picard lattice, intersection form, Euler
//!   characteristic, eigenbasis coordinates and cone tests;
//! - [`dynamics`]: pullback matrices of the pseudoautomorphisms and exact
//!   normalization into the fundamental cone `C`;
//! - [`sections`]: the `h⁰` engine, growth scans with exact bound checks and
//!   the growth-exponent estimator;
//! - [`degrees`]: closed-form numerical dimensions from dynamical degrees.
//!
//! No floating point participates in any comparison; decimal output is
//! produced only at the display boundary.

pub mod bigdec;
pub mod degrees;
pub mod dynamics;
pub mod lattice;
pub mod qfield;
pub mod sections;

/// Errors shared across the engine.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("class is not big")]
    NotBig,
    #[error("class is not integral")]
    NonIntegralClass,
    #[error("integral class produced a non-integer Euler characteristic")]
    IntegralityViolation,
    #[error("neither the landed class nor its tau1 image is nef")]
    NefificationFailure,
    #[error("cone normalization exceeded {cap} iterations")]
    IterationCap { cap: u64 },
    #[error("matrix is not invertible over the integers")]
    NonInvertible,
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
