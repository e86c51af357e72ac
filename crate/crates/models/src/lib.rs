//! Planning models for reach-avoid planning: Dubins car, 3-D single
//! integrator, time-switched polynomial planner, planar near-hover
//! quadrotor, least-squares affine fitting and a toy unicycle tracker.

mod dubins;
mod error;
mod fit;
mod integrator;
mod near_hover;
mod polynomial;
mod registry;
mod tracker;
mod turtlebot;

pub use dubins::{dubins_model, Dubins};
pub use error::{ModelError, Result};
pub use fit::{fit_affine_model, AffineFit, CoordinateFit, Trajectory};
pub use integrator::{single_integrator_3d, SingleIntegrator3d};
pub use near_hover::{near_hover_2d, NearHover2d};
pub use polynomial::{polynomial_model, Polynomial, PolynomialParams};
pub use registry::ModelSpec;
pub use tracker::{toy_unicycle_tracker, track_pwa_plan, TrackerGains};
pub use turtlebot::{
    affinize_on_grid, dubins_grid, turtlebot_scenario, turtlebot_system, TURTLEBOT_DT, TURTLEBOT_THETA_POINTS,
};
