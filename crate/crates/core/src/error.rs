//! Error type shared by all engine layers.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong, from malformed inputs to failed exact checks.
///
/// Mathematical failures carry a witness (open index, point name, degree)
/// wherever one exists, so that callers can report the exact location of the
/// first violated identity.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("field mismatch")]
    FieldMismatch,

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("not a cover: point {point} lies in no open")]
    NotACover { point: String },

    #[error("invalid site: {0}")]
    InvalidSite(String),

    #[error("restriction target is not contained in the open")]
    RestrictOutsideOpen,

    #[error("bundles live on different opens")]
    OpenMismatch,

    #[error("bundle families do not match")]
    FamilyMismatch,

    #[error("morphism is not closed (differential residual is nonzero)")]
    NotClosed,

    #[error("morphism is not homogeneous of total degree {expected}")]
    WrongDegree { expected: i64 },

    #[error("differential does not square to zero at point {point}, degree {degree}")]
    NotSquareZero { point: String, degree: i64 },

    #[error(
        "Maurer-Cartan residual nonzero at tuple {tuple:?}, bidegree ({p},{q}), point {point}, degree {degree}"
    )]
    McViolation {
        tuple: Vec<usize>,
        p: usize,
        q: i64,
        point: String,
        degree: i64,
    },

    #[error("cocycle-mod-Q violation at triple ({0}, {1}, {2})", .triple.0, .triple.1, .triple.2)]
    CocycleViolation { triple: (usize, usize, usize) },

    #[error("descent identity failed: {context}")]
    DescentIdentity { context: String },

    #[error("acyclicity fails for open {open} at point {point}, degree {degree}")]
    AcyclicityFailure {
        open: usize,
        point: String,
        degree: i64,
    },

    #[error("surjectivity modulo fails for open {open} at point {point}, degree {degree}")]
    SurjectivityFailure {
        open: usize,
        point: String,
        degree: i64,
    },

    #[error("kernel transition not invertible for open {open} at point {point}")]
    KernelTransitionNotInvertible { open: usize, point: String },

    #[error("induction check failed at degree {degree}: {detail} (open {open}, point {point})")]
    InductionCheckFailed {
        degree: i64,
        open: usize,
        point: String,
        detail: &'static str,
    },

    #[error("exact identity violated in {context}")]
    ResidualNonzero { context: String },

    #[error("unresolved reference: {0}")]
    UnresolvedReference(String),

    #[error("{0}")]
    Invalid(String),
}
