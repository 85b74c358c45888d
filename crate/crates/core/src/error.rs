use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields")]
    MixedFields,
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("invalid scalar literal {literal:?}: {reason}")]
    ScalarSyntax { literal: String, reason: String },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("algebra closure exceeded the word-length cap of {0}")]
    ClosureTooLong(usize),

    #[error("inconsistent dimensions: {0}")]
    InconsistentDims(String),
    #[error("GF({p}) is too small: need p > {needed}")]
    FieldTooSmall { p: u64, needed: usize },
    #[error("module action is not a homomorphic image of the faithful algebra: {0}")]
    NotAHomomorphism(String),
    #[error("trace-form radical is not nilpotent")]
    RadicalNotNilpotent,
    #[error("element does not lie in the algebra")]
    NotInAlgebra,

    #[error("simple module is not split: End_A(N) has dimension {0}")]
    NonSplitSimple(usize),
    #[error("image of the algebra spans only {found} of {expected} matrix dimensions")]
    ImageNotFull { found: usize, expected: usize },
    #[error("kernel ideal of the simple quotient has no identity")]
    NoIdealIdentity,
    #[error("idempotent defect e^2 - e is not a nilpotent element of the given ideal")]
    NotNilpotentDefect,
    #[error("idempotent lift failed to converge")]
    LiftDiverged,

    #[error("no base point with nonzero first frame coordinate")]
    DegenerateBasePoint,
    #[error("section candidate for generator {s} and transversal element {t} is not invertible")]
    SectionSingular { s: usize, t: usize },
    #[error("decomposition did not terminate within {0} levels")]
    MaxDepthExceeded(usize),
    #[error("rewriting produced more than {0} terms")]
    TermBlowup(usize),
    #[error("verification failed at level {level}: {check}")]
    VerificationFailed { level: usize, check: String },

    #[error("module too large to enumerate ({0} vectors)")]
    TooLargeToEnumerate(u128),
    #[error("permutation group exceeds the order cap of {0}")]
    GroupTooLarge(usize),
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("input error: {0}")]
    Input(String),
}

impl Error {
    /// Errors caused by malformed or inconsistent input rather than pipeline failures.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::ScalarSyntax { .. }
                | Error::NotPrime(_)
                | Error::InconsistentDims(_)
                | Error::FieldTooSmall { .. }
                | Error::NotAHomomorphism(_)
                | Error::InvalidPermutation(_)
                | Error::GroupTooLarge(_)
                | Error::Input(_)
        )
    }
}
