//! Discrete-time, time-variant piecewise-affine (PWA) planning systems over
//! the augmented state `[w; k; p_other]`.

mod error;
mod eti;
mod layout;
mod merge;
mod model;
mod points;
mod system;

pub use error::{PwaError, Result};
pub use eti::{check_eti, eti_residual, max_eti_prefix, non_eti_states, EtiReport, EtiResidual, ETI_TOL};
pub use layout::StateLayout;
pub use merge::{merge_regions, union_is_convex};
pub use model::{
    affinize, euler_step, finite_difference_jacobian, linearize_euler, voronoi_regions,
    Discretization, PlanningModel,
};
pub use points::{grid_points, uniform_points};
pub use system::{interpolate, step_count, ModeSequence, PwaRegion, PwaSystem, Rollout, MODE_TOL};
