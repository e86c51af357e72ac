use parc_core::CoreError;
use parc_polytope::PolytopeError;
use parc_pwa::PwaError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
    #[error(transparent)]
    Pwa(#[from] PwaError),
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("time {t} outside [0, {tf}]")]
    OutOfRange { t: f64, tf: f64 },
    #[error("trajectory data misaligned: {0}")]
    Misaligned(String),
    #[error("least-squares design matrix is rank deficient at timestep {step}")]
    RankDeficient { step: usize },
    #[error("unknown model `{0}`")]
    UnknownModel(String),
}

pub type Result<T> = std::result::Result<T, ModelError>;
