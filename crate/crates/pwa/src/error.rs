use parc_polytope::PolytopeError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PwaError {
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
    #[error("state at timestep {step} lies in no region")]
    OutOfDomain { step: usize },
    #[error("invalid layout: {0}")]
    InvalidLayout(String),
    #[error("invalid system: {0}")]
    InvalidSystem(String),
    #[error("linearization points {first} and {second} coincide")]
    DuplicatePoint { first: usize, second: usize },
    #[error("model evaluation failed: {0}")]
    Model(String),
}

pub type Result<T> = std::result::Result<T, PwaError>;
