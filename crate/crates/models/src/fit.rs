use nalgebra::{DMatrix, DVector};
use parc_core::TrajectoryPair;
use parc_polytope::{AffineMap, HPolytope};
use parc_pwa::{step_count, PwaRegion, PwaSystem, StateLayout};
use serde::{Deserialize, Serialize};

use crate::error::{ModelError, Result};

const TIME_TOL: f64 = 1e-9;
const RANK_TOL: f64 = 1e-10;

/// One sampled rollout in planning coordinates with its parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub k: Vec<f64>,
    pub t: Vec<f64>,
    pub states: Vec<Vec<f64>>,
}

impl From<&TrajectoryPair> for Trajectory {
    /// Uses the realized trajectory.
    fn from(p: &TrajectoryPair) -> Self {
        Self { k: p.k.clone(), t: p.t.clone(), states: p.realized.clone() }
    }
}

/// Least-squares fit of one planning coordinate at one timestep:
/// `Δp_i ≈ coeffs · k + offset`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoordinateFit {
    pub coeffs: Vec<f64>,
    pub offset: f64,
    /// Euclidean norm of the residual vector.
    pub residual: f64,
}

/// Time-variant affine planning model fitted from data: planning rows are
/// `p' = p + C_t k + d_t` and parameter rows are the identity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AffineFit {
    pub layout: StateLayout,
    pub dt: f64,
    pub tf: f64,
    /// `steps[t][i]` fits planning coordinate `i` over `[t dt, (t + 1) dt]`.
    pub steps: Vec<Vec<CoordinateFit>>,
}

impl AffineFit {
    pub fn map(&self, t: usize) -> AffineMap {
        let l = self.layout;
        let n = l.total();
        let mut c = DMatrix::identity(n, n);
        let mut d = DVector::zeros(n);
        for (i, f) in self.steps[t].iter().enumerate() {
            let row = l.plan_index(i);
            for (j, &v) in f.coeffs.iter().enumerate() {
                c[(row, l.n_w() + j)] = v;
            }
            d[row] = f.offset;
        }
        AffineMap::new(c, d).expect("consistent dimensions")
    }

    /// One region per timestep covering `domain` (all of space when absent).
    pub fn to_system(&self, domain: Option<HPolytope>) -> Result<PwaSystem> {
        let n = self.layout.total();
        let region = domain.clone().unwrap_or_else(|| HPolytope::universe(n));
        let steps = (0..self.steps.len())
            .map(|t| vec![PwaRegion { region: region.clone(), map: self.map(t) }])
            .collect();
        Ok(PwaSystem::new(self.layout, self.dt, self.tf, steps, domain)?)
    }

    pub fn max_residual(&self) -> f64 {
        self.steps.iter().flatten().map(|f| f.residual).fold(0.0, f64::max)
    }
}

/// Index of the sample at time `g`.
fn sample_at(t: &[f64], g: f64) -> Option<usize> {
    t.iter().position(|&s| (s - g).abs() <= TIME_TOL)
}

/// Fits the structured time-variant affine model by per-timestep,
/// per-coordinate least squares on `[k, 1]`, and assembles the PWA system.
pub fn fit_affine_model(
    trajectories: &[Trajectory],
    layout: StateLayout,
    dt: f64,
    tf: f64,
    domain: Option<HPolytope>,
) -> Result<(AffineFit, PwaSystem)> {
    let steps = step_count(dt, tf)?;
    let (n_k, n_p) = (layout.n_k(), layout.n_plan());
    if trajectories.len() < n_k + 1 {
        return Err(ModelError::InvalidParams(format!(
            "need at least {} trajectories, got {}",
            n_k + 1,
            trajectories.len()
        )));
    }
    // rows of planning states at every grid time
    let mut grid_states: Vec<Vec<&Vec<f64>>> = Vec::with_capacity(trajectories.len());
    for (j, tr) in trajectories.iter().enumerate() {
        if tr.k.len() != n_k {
            return Err(ModelError::Misaligned(format!("trajectory {j} has {} parameters, expected {n_k}", tr.k.len())));
        }
        if tr.t.len() != tr.states.len() || tr.states.iter().any(|s| s.len() != n_p) {
            return Err(ModelError::Misaligned(format!("trajectory {j} rows must have {n_p} entries, one per time")));
        }
        let rows = (0..=steps)
            .map(|m| {
                sample_at(&tr.t, m as f64 * dt)
                    .map(|s| &tr.states[s])
                    .ok_or_else(|| ModelError::Misaligned(format!("trajectory {j} has no sample at time {}", m as f64 * dt)))
            })
            .collect::<Result<Vec<_>>>()?;
        grid_states.push(rows);
    }
    let x = DMatrix::from_fn(trajectories.len(), n_k + 1, |r, c| if c < n_k { trajectories[r].k[c] } else { 1.0 });
    let svd = x.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    // the regressors [k, 1] are shared by every timestep
    if smin.is_nan() || smin <= RANK_TOL * smax.max(1.0) {
        return Err(ModelError::RankDeficient { step: 0 });
    }
    let mut fits = Vec::with_capacity(steps);
    for t in 0..steps {
        let row = (0..n_p)
            .map(|i| {
                let y = DVector::from_fn(trajectories.len(), |r, _| grid_states[r][t + 1][i] - grid_states[r][t][i]);
                let beta = svd.solve(&y, 0.0).map_err(|_| ModelError::RankDeficient { step: t })?;
                let residual = (&x * &beta - &y).norm();
                Ok(CoordinateFit { coeffs: beta.rows(0, n_k).iter().copied().collect(), offset: beta[n_k], residual })
            })
            .collect::<Result<Vec<_>>>()?;
        fits.push(row);
    }
    let fit = AffineFit { layout, dt, tf, steps: fits };
    let system = fit.to_system(domain)?;
    Ok((fit, system))
}
