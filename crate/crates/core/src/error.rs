//! Crate-wide error type.
//!
//! Every failure mode is a distinct variant so callers (and the CLI) can react
//! to the *kind* of failure, not a string. Mathematical invariant violations
//! get their own variants: they indicate a bug or an inconsistent input, and
//! the payload carries enough context to reproduce the check by hand.

use thiserror::Error;

/// All errors produced by the engine.
#[derive(Debug, Error)]
pub enum Error {
    /// An operation mixed elements of two different finite fields.
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(&'static str, &'static str),

    /// A field size outside the supported table was requested.
    #[error("no supported field of order {p}^{k}")]
    UnsupportedField { p: u64, k: u32 },

    /// Division by zero in a finite field.
    #[error("division by zero in {0}")]
    DivisionByZero(&'static str),

    /// An element of a larger field was asked to land in a subfield it is not in.
    #[error("element {element} of {from} does not lie in {to}")]
    NotInSubfield {
        element: String,
        from: &'static str,
        to: &'static str,
    },

    /// No embedding is defined between the two fields.
    #[error("no embedding {0} -> {1}")]
    NoEmbedding(&'static str, &'static str),

    /// Square root requested of a non-square.
    #[error("{element} is not a square in {field}")]
    NotASquare { element: String, field: &'static str },

    /// A Laurent-series coefficient outside the known window was requested.
    #[error(
        "precision underflow: coefficient of t^{exponent} requested, \
         window is [{val}, {end})"
    )]
    PrecisionUnderflow { exponent: i64, val: i64, end: i64 },

    /// A Laurent-series operation needs a nonzero leading coefficient.
    #[error("laurent series is zero on its whole window [{val}, {end})")]
    ZeroSeries { val: i64, end: i64 },

    /// Exact polynomial division left a remainder.
    #[error("polynomial division has nonzero remainder: ({num}) / ({den})")]
    InexactDivision { num: String, den: String },

    /// The requested curve index (field tag) has no registered model.
    #[error("no analysis target registered for {0:?}")]
    NoSuchCurve(String),

    /// A Weierstrass model failed its nonsingularity check.
    #[error("singular model over {field}: discriminant is zero")]
    SingularModel { field: &'static str },

    /// A point that should lie on a curve does not.
    #[error("point ({x}, {y}) is not on the curve over {field}")]
    PointNotOnCurve {
        x: String,
        y: String,
        field: &'static str,
    },

    /// Zeta numerator reconstruction produced no candidate consistent with
    /// every constraint, or an internal cross-check failed.
    #[error("zeta reconstruction failed for {field}: {reason}")]
    ZetaReconstruction { field: &'static str, reason: String },

    /// A degree-two place failed part of its residue-field certificate.
    #[error("degree-two place certificate failed on {curve}: {reason}")]
    PlaceCertificate { curve: &'static str, reason: String },

    /// The quotient graph failed a structural validation.
    #[error("quotient graph invalid: {0}")]
    InvalidGraph(String),

    /// A vertex name was not found in the quotient graph.
    #[error("unknown vertex {0:?}")]
    UnknownVertex(String),

    /// The chord-tangent group law produced an inconsistent result.
    #[error("group law failure on {field}: {0}", field = .1)]
    GroupLaw(String, &'static str),

    /// A form vector ran out of truncation depth for the requested operation.
    #[error("depth exhausted: need depth >= {needed}, have {depth}")]
    DepthExhausted { depth: usize, needed: usize },

    /// The linear system solver detected an internal inconsistency.
    #[error("linear solve failed: {0}")]
    LinearSolve(String),

    /// An eigen-decomposition cross-check failed.
    #[error("spectral decomposition failed: {0}")]
    Spectral(String),

    /// A matrix reduced to a coset outside the canonical repertoire.
    #[error("coset reduces outside the canonical repertoire: {0}")]
    OutsideRepertoire(String),

    /// A witness chain replay did not reproduce the original matrix.
    #[error("witness replay mismatch: {0}")]
    WitnessMismatch(String),

    /// The Hecke column tally disagreed with the closed-form prediction.
    #[error("hecke tally mismatch: {0}")]
    TallyMismatch(String),

    /// An eigenvalue outside the admissible set was fed to the RH check.
    #[error("eigenvalue {lambda} not admissible for q={q}")]
    InadmissibleEigenvalue { lambda: i64, q: i64 },

    /// A named pipeline stage failed; wraps the underlying error.
    #[error("stage {stage}: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },

    /// Report serialisation failed.
    #[error("serialisation: {0}")]
    Serialize(#[from] serde_json::Error),
}

impl Error {
    /// Tag an error with the pipeline stage it occurred in.
    pub fn in_stage(self, stage: &'static str) -> Self {
        Error::Stage {
            stage,
            source: Box::new(self),
        }
    }
}
