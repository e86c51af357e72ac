use std::path::PathBuf;

use parc_core::CoreError;
use parc_models::ModelError;
use parc_polytope::PolytopeError;
use parc_pwa::PwaError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },
    #[error("cannot parse {path}: {source}")]
    Parse { path: PathBuf, source: serde_json::Error },
    #[error("invalid arguments: {0}")]
    Usage(String),
    #[error("no goal-reaching expert plan found in {0} samples")]
    NoExpert(usize),
    #[error("sampling budget exhausted after {attempts} attempts with {found} of {wanted} plans")]
    Exhausted { attempts: usize, found: usize, wanted: usize },
    #[error("{failed} of {total} plans failed verification")]
    Verification { failed: usize, total: usize },
    #[error("csv output failed: {0}")]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Pwa(#[from] PwaError),
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
}

pub type Result<T> = std::result::Result<T, CliError>;

pub const EXIT_PARSE: i32 = 2;
pub const EXIT_NO_EXPERT: i32 = 3;
pub const EXIT_ETI: i32 = 4;
pub const EXIT_NUMERICAL: i32 = 5;
pub const EXIT_VERIFY: i32 = 6;
pub const EXIT_RANK: i32 = 7;

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Read { .. } | CliError::Parse { .. } | CliError::Usage(_) => EXIT_PARSE,
            CliError::Write { .. } | CliError::Csv(_) => 1,
            CliError::NoExpert(_) => EXIT_NO_EXPERT,
            CliError::Verification { .. } => EXIT_VERIFY,
            CliError::Exhausted { .. } => EXIT_NUMERICAL,
            CliError::Core(e) => core_code(e),
            CliError::Model(e) => match e {
                ModelError::RankDeficient { .. } => EXIT_RANK,
                ModelError::Core(c) => core_code(c),
                ModelError::InvalidParams(_) | ModelError::Misaligned(_) | ModelError::UnknownModel(_) => EXIT_PARSE,
                _ => EXIT_NUMERICAL,
            },
            CliError::Pwa(PwaError::InvalidLayout(_) | PwaError::InvalidSystem(_)) => EXIT_PARSE,
            CliError::Pwa(_) | CliError::Polytope(_) => EXIT_NUMERICAL,
        }
    }
}

fn core_code(e: &CoreError) -> i32 {
    match e {
        CoreError::EtiViolation { .. } => EXIT_ETI,
        CoreError::ExpertNotGoalReaching(_) => EXIT_NO_EXPERT,
        CoreError::InvalidInput(_) | CoreError::Misaligned(_) | CoreError::Misalignment(_) => EXIT_PARSE,
        _ => EXIT_NUMERICAL,
    }
}
