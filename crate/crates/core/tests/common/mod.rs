#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use parc_core::Scenario;
use parc_polytope::{AffineMap, HPolytope};
use parc_pwa::{PwaRegion, PwaSystem, StateLayout};

/// `x' = x + dt k` on `[x; k]`, one region per step.
pub fn integrator_1d(dt: f64, steps: usize, x: (f64, f64), k: (f64, f64)) -> PwaSystem {
    let domain = HPolytope::from_bounds(&[x.0, k.0], &[x.1, k.1]).unwrap();
    let map = AffineMap::new(nalgebra::dmatrix![1.0, dt; 0.0, 1.0], DVector::zeros(2)).unwrap();
    let region = PwaRegion { region: domain.clone(), map };
    PwaSystem::new(StateLayout::minimal(1, 1, 0), dt, dt * steps as f64, vec![vec![region]; steps], Some(domain))
        .unwrap()
}

/// Planar integrator on `[x, y, kx, ky]`.
pub fn integrator_2d(dt: f64, steps: usize, lo: [f64; 4], hi: [f64; 4]) -> PwaSystem {
    let domain = HPolytope::from_bounds(&lo, &hi).unwrap();
    let mut c = DMatrix::identity(4, 4);
    c[(0, 2)] = dt;
    c[(1, 3)] = dt;
    let map = AffineMap::new(c, DVector::zeros(4)).unwrap();
    let region = PwaRegion { region: domain.clone(), map };
    PwaSystem::new(StateLayout::minimal(2, 2, 0), dt, dt * steps as f64, vec![vec![region]; steps], Some(domain))
        .unwrap()
}

/// `x' = x + dt v, v' = v + dt k` on `[x; k; v]`.
pub fn double_integrator(dt: f64, steps: usize, lo: [f64; 3], hi: [f64; 3]) -> PwaSystem {
    let domain = HPolytope::from_bounds(&lo, &hi).unwrap();
    let c = nalgebra::dmatrix![1.0, 0.0, dt; 0.0, 1.0, 0.0; 0.0, dt, 1.0];
    let map = AffineMap::new(c, DVector::zeros(3)).unwrap();
    let region = PwaRegion { region: domain.clone(), map };
    PwaSystem::new(StateLayout::minimal(1, 1, 1), dt, dt * steps as f64, vec![vec![region]; steps], Some(domain))
        .unwrap()
}

pub fn interval(lo: f64, hi: f64) -> HPolytope {
    HPolytope::from_bounds(&[lo], &[hi]).unwrap()
}

pub fn scenario_1d(goal: (f64, f64), obstacles: &[(f64, f64)], k: (f64, f64), tf: f64) -> Scenario {
    Scenario {
        layout: StateLayout::minimal(1, 1, 0),
        goal: interval(goal.0, goal.1),
        goal_dims: 1,
        obstacles: obstacles.iter().map(|o| interval(o.0, o.1)).collect(),
        k_domain: interval(k.0, k.1),
        p_other: HPolytope::universe(0),
        tf,
        workspace: None,
        start: None,
    }
}

pub fn grid(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> + Clone {
    (0..n).map(move |i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
}

/// Whether the closed segment `[a, b]` meets the closed interval `[lo, hi]`.
pub fn segment_meets(a: f64, b: f64, lo: f64, hi: f64) -> bool {
    a.min(b) <= hi && a.max(b) >= lo
}
