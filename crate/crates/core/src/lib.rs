//! Backward reach-avoid sets for piecewise-affine planning models: reach
//! chains per mode sequence, continuous-time avoid sets, tracking-error
//! buffering, sampling and plan verification.

mod avoid;
mod bras;
mod error;
mod expert;
mod reach;
mod scenario;
mod tracking;

pub use avoid::{avoid_chain, buffer_obstacle, collision_filter, intermediate_avoid};
pub use bras::{
    combine_decoupled, compute_bras, sample_bras, verify_plan, AvoidSet, BrasOptions, BrasResult,
    FilterFlag, Provenance, SampleOutcome, VerifyReport, Violation, DEFAULT_REJECTION_BUDGET,
    DEFAULT_SUBSTEPS,
};
pub use error::{CoreError, Result};
pub use expert::{find_expert, DEFAULT_EXPERT_BUDGET};
pub use reach::{reach_chain, reach_set, reach_set_with_error, ReachChain};
pub use scenario::{augment, Scenario};
pub use tracking::{error_sets, estimate_error, ErrorMeta, ErrorProfile, TrajectoryPair};
