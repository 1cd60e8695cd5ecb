use thiserror::Error;

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("solution blew up; last good time t = {t_last}")]
    BlowUp { t_last: f64 },

    #[error("density references `{name}`, which is not a field variable")]
    AdjointVariable { name: String },

    #[error(
        "`{name}` appears explicitly; fluxes with explicit coordinates are not \
         periodic, so the integral form of the conservation law does not close"
    )]
    ExplicitCoordinate { name: String },

    #[error("jet variable `{var}` carries a time derivative and cannot be \
             computed from a single snapshot")]
    TimeDerivative { var: String },

    #[error("function family `{name}` has no supplied values")]
    MissingFunction { name: String },

    #[error(transparent)]
    Symbolic(#[from] conslaw_core::DiffAlgError),
}

pub type Result<T> = std::result::Result<T, SolverError>;
