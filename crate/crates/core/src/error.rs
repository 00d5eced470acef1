use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("operands live on different coordinate systems")]
    MixedCoordinateSystems,

    #[error("substitution image for `{variable}` has the wrong parity")]
    ParityMismatch { variable: String },

    #[error("expected an expression on {expected}, found variable `{found}`")]
    WrongBundle { expected: &'static str, found: String },

    #[error("structure must be even")]
    OddStructure,

    #[error("master equation violated: [[P,P]] = {residual}")]
    MasterEquation { residual: String },

    #[error("argument `{0}` is not a function on the base manifold")]
    NotABaseFunction(String),

    #[error("expected {expected} arguments, got {found}")]
    ArityMismatch { expected: usize, found: usize },

    #[error("argument must be parity-homogeneous: `{0}`")]
    Inhomogeneous(String),

    #[error("invalid manifold declaration: {0}")]
    InvalidManifold(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
