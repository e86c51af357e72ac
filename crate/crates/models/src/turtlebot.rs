use std::f64::consts::PI;

use nalgebra::DVector;
use parc_core::Scenario;
use parc_polytope::HPolytope;
use parc_pwa::{affinize, grid_points, Discretization, PwaSystem, StateLayout};

use crate::dubins::Dubins;
use crate::error::Result;

pub const TURTLEBOT_DT: f64 = 0.5;
pub const TURTLEBOT_THETA_POINTS: usize = 13;

/// Goal `[-1, 1]²`, one obstacle `[-2.5, -1.5] × [-1, 0]`, speeds in
/// `[0.5, 2]`, turn rates in `[-1, 1]`, start `[-4, 0, π/5]`, `t_f = 4`.
pub fn turtlebot_scenario() -> Scenario {
    let b = |lo: &[f64], hi: &[f64]| HPolytope::from_bounds(lo, hi).expect("valid box");
    Scenario {
        layout: StateLayout::minimal(2, 2, 1),
        goal: b(&[-1.0, -1.0], &[1.0, 1.0]),
        goal_dims: 2,
        obstacles: vec![b(&[-2.5, -1.0], &[-1.5, 0.0])],
        k_domain: b(&[0.5, -1.0], &[2.0, 1.0]),
        p_other: b(&[-PI], &[PI]),
        tf: 4.0,
        workspace: Some(b(&[-5.0, -5.0], &[5.0, 5.0])),
        start: Some(vec![-4.0, 0.0, PI / 5.0]),
    }
}

/// Default linearization grid for the Dubins car over the augmented box:
/// one point on every axis except heading.
pub fn dubins_grid(theta_points: usize) -> Vec<usize> {
    vec![1, 1, 1, 1, theta_points]
}

/// Affinizes `model` over the scenario domain with a tensor grid of
/// linearization points shared by every timestep.
pub fn affinize_on_grid<M: parc_pwa::PlanningModel>(
    model: &M,
    scenario: &Scenario,
    counts: &[usize],
    dt: f64,
    disc: Discretization,
) -> Result<PwaSystem> {
    let domain = scenario
        .domain()?
        .unwrap_or_else(|| HPolytope::universe(scenario.layout.total()));
    let (lo, hi) = domain.clip(parc_polytope::tolerances().world).bounding_box()?;
    let points: Vec<DVector<f64>> = grid_points(&lo, &hi, counts);
    Ok(affinize(model, &[points], &domain, dt, scenario.tf, disc)?)
}

pub fn turtlebot_system(dt: f64, theta_points: usize) -> Result<PwaSystem> {
    affinize_on_grid(&Dubins, &turtlebot_scenario(), &dubins_grid(theta_points), dt, Discretization::Auto)
}
