//! Orthogonal polynomials on the unit circle and their order-one
//! quasi-orthogonal companions.
//!
//! The library is organized around a handful of value types:
//!
//! * [`CPoly`] — dense complex polynomial, the universal value type.
//! * [`MeasureSpec`] / [`MomentTable`] — weights on the circle and their
//!   trigonometric moments (trapezoid quadrature).
//! * [`OpucFamily`] — monic Φₙ, reversed Φ*ₙ, Verblunsky coefficients αₙ and
//!   squared norms for a measure, built by the Szegő recursion.
//! * [`QuasiFamily`] — Φ̃ₙ = Φₙ − aₙΦₙ₋₁ together with an optional companion
//!   measure μ̃ against which orthogonality is *verified*, never assumed.
//! * [`ChainData`] — the real sequences tₙ, cₙ, gₙ and the polynomials Rₙ of
//!   the associated three-term recurrence.
//!
//! Kernel evaluations (CD kernel, kernel-type sums) and every inequality
//! checker live in [`kernels`]; para-orthogonal polynomials and the chain
//! machinery in [`popuc_chain`]. All operations are pure functions over
//! immutable values and safe to call concurrently.

// Validation guards are written as `!(x > 0.0)` on purpose: the negated
// comparison is false for NaN, so a poisoned value is rejected instead of
// slipping through an `x <= 0.0` test.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cpoly;
pub mod kernels;
pub mod marcellan;
pub mod measure;
pub mod popuc_chain;
pub mod szego;

pub use cpoly::CPoly;
pub use kernels::InequalityReport;
pub use marcellan::{M2Report, QuasiFamily};
pub use measure::{ASeqHint, MeasureSpec, MomentTable};
pub use popuc_chain::ChainData;
pub use szego::OpucFamily;

use num_complex::Complex64;

/// Errors shared by every module in the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A polynomial was passed where its degree violates a precondition.
    #[error("invalid degree: got {got}, operation requires {requirement}")]
    InvalidDegree { got: usize, requirement: String },

    /// The root finder could not certify its iterates.
    #[error("root finding did not converge: worst residual {residual:.3e} after {iterations} iterations")]
    NonConvergence {
        iterations: usize,
        residual: f64,
        /// Best iterate per root, paired with its normalized residual.
        best: Vec<(Complex64, f64)>,
    },

    /// Division by the zero polynomial.
    #[error("division by zero polynomial")]
    ZeroDivisor,

    /// A weight or its parameters are outside the admissible domain.
    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    /// A moment table does not cover the requested degree range.
    #[error("moment table covers |k| <= {kmax}, operation needs |k| <= {need}")]
    MomentRange { kmax: usize, need: usize },

    /// No companion measure is known for the given spec / a-rule pair.
    #[error("no known companion measure: {0}")]
    NoCompanion(String),

    /// A Verblunsky coefficient left the open unit disk.
    #[error("verblunsky coefficient out of range at n={n}: |alpha| = {modulus}")]
    AlphaOutOfRange { n: usize, modulus: f64 },

    /// Moment extraction produced |alpha| at the conditioning limit.
    #[error("ill-conditioned measure at step n={n}: extracted |alpha| = {modulus}")]
    IllConditioned { n: usize, modulus: f64 },

    /// A division that must be exact left a residual above tolerance.
    #[error("nonvanishing division remainder: {context} (|rem| = {residual:.3e})")]
    Remainder { context: String, residual: f64 },

    /// The ratio rule needs a nonzero Verblunsky coefficient.
    #[error("zero verblunsky coefficient at index {0}; ratio rule not applicable")]
    ZeroAlpha(usize),

    /// Inputs that must satisfy an algebraic identity do not.
    #[error("inconsistent inputs: {0}")]
    Inconsistent(String),

    /// A stated precondition failed.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// Chain-sequence data hit a zero denominator.
    #[error("degenerate chain data: {0}")]
    DegenerateData(String),

    /// Argument outside the operation's domain.
    #[error("domain error: {0}")]
    Domain(String),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Serde adapter representing `Complex64` as a `[re, im]` pair.
pub(crate) mod complex_serde {
    use num_complex::Complex64;
    use serde::{Serialize, Serializer};

    pub fn serialize<S: Serializer>(c: &Complex64, s: S) -> std::result::Result<S::Ok, S::Error> {
        [c.re, c.im].serialize(s)
    }
}
