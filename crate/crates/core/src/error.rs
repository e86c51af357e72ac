use parc_polytope::PolytopeError;
use parc_pwa::PwaError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CoreError {
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
    #[error(transparent)]
    Pwa(#[from] PwaError),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("expert plan does not reach the goal: {0}")]
    ExpertNotGoalReaching(String),
    #[error("region {region} at timestep {step} is not ETI over the first {n_eti} coordinates")]
    EtiViolation { step: usize, region: usize, n_eti: usize },
    #[error("trajectory timestamps misaligned: {0}")]
    Misaligned(String),
    #[error("reach set is empty")]
    EmptyReach,
    #[error("decoupled parts do not align: {0}")]
    Misalignment(String),
}

pub type Result<T> = std::result::Result<T, CoreError>;
