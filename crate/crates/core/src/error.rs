use thiserror::Error;

/// Errors raised by the differential-algebra engine and the pipelines built
/// on top of it.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum DiffAlgError {
    #[error("derivative order {order} exceeds the engine maximum {max}")]
    OrderOverflow { order: u32, max: u32 },

    #[error("no value assigned for symbol `{name}`")]
    MissingSymbol { name: String },

    #[error("substitution for `{name}` is cyclic: a substituted variable occurs in a target")]
    CyclicSubstitution { name: String },

    #[error("substitution target for `{name}` must have jet order 0")]
    SubstitutionTargetOrder { name: String },

    #[error("substitution does not cover adjoint variable `{name}`")]
    SubstitutionMissing { name: String },

    #[error("name `{name}` collides with an existing symbol")]
    NameCollision { name: String },

    #[error("invalid name `{name}`: {reason}")]
    InvalidName { name: String, reason: String },

    #[error("values live in incompatible index conventions")]
    IncompatibleContext,

    #[error("symbol `{name}` does not exist in the target convention")]
    UnknownSymbolInContext { name: String },

    #[error("division by a non-constant expression")]
    NonConstantDivisor,

    #[error("division by zero")]
    DivisionByZero,

    #[error("conserved-vector formula supports Lagrangians of jet order <= 3, got {order}")]
    UnsupportedLagrangianOrder { order: u32 },

    #[error("reduction failed: {detail}")]
    ReductionFailure { detail: String },

    #[error("invalid solved form: {detail}")]
    InvalidSolvedForm { detail: String },

    #[error("{detail}")]
    Unsupported { detail: String },
}

pub type Result<T> = std::result::Result<T, DiffAlgError>;
