use nalgebra::DVector;
use parc_polytope::{tolerances, AffineMap, HPolytope};
use serde::{Deserialize, Serialize};

use crate::error::{PwaError, Result};
use crate::layout::StateLayout;

/// Boundary tolerance used by [`PwaSystem::mode_of`].
pub const MODE_TOL: f64 = 1e-8;

/// One polytopic region with its affine update.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PwaRegion {
    pub region: HPolytope,
    #[serde(flatten)]
    pub map: AffineMap,
}

/// Region index per timestep.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModeSequence {
    pub modes: Vec<usize>,
}

impl ModeSequence {
    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }
}

/// Discrete-time, time-variant PWA system over the augmented state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SystemRepr", into = "SystemRepr")]
pub struct PwaSystem {
    layout: StateLayout,
    dt: f64,
    tf: f64,
    steps: Vec<Vec<PwaRegion>>,
    domain: Option<HPolytope>,
}

/// Number of whole timesteps in `[0, tf]`, or an error if `dt` does not divide `tf`.
pub fn step_count(dt: f64, tf: f64) -> Result<usize> {
    if !(dt > 0.0 && tf > 0.0 && dt.is_finite() && tf.is_finite()) {
        return Err(PwaError::InvalidSystem(format!("dt = {dt}, tf = {tf} must be positive")));
    }
    let ratio = tf / dt;
    let n = ratio.round();
    if (ratio - n).abs() > 1e-9 * ratio.max(1.0) || n < 1.0 {
        return Err(PwaError::InvalidSystem(format!("dt = {dt} does not divide tf = {tf}")));
    }
    Ok(n as usize)
}

/// Rollout of a PWA system with interpolated intermediate samples.
#[derive(Debug, Clone, PartialEq)]
pub struct Rollout {
    /// States at `t = 0, dt, ..., tf`.
    pub states: Vec<DVector<f64>>,
    /// Region used at each timestep.
    pub modes: Vec<usize>,
    /// `(t, x)` pairs: every discrete state plus `substeps - 1` interpolated
    /// points inside each interval.
    pub samples: Vec<(f64, DVector<f64>)>,
    /// First timestep whose state lay in no region, if any.
    pub exited_at: Option<usize>,
}

impl PwaSystem {
    pub fn new(
        layout: StateLayout,
        dt: f64,
        tf: f64,
        steps: Vec<Vec<PwaRegion>>,
        domain: Option<HPolytope>,
    ) -> Result<Self> {
        let n = step_count(dt, tf)?;
        if steps.len() != n {
            return Err(PwaError::InvalidSystem(format!(
                "{} timesteps given, tf / dt = {n}",
                steps.len()
            )));
        }
        let dim = layout.total();
        for (t, regions) in steps.iter().enumerate() {
            if regions.is_empty() {
                return Err(PwaError::InvalidSystem(format!("timestep {t} has no regions")));
            }
            for (i, r) in regions.iter().enumerate() {
                if r.region.dim() != dim || r.map.dim() != dim {
                    return Err(PwaError::InvalidSystem(format!(
                        "region {i} at timestep {t} has dimension {} / map {}, layout needs {dim}",
                        r.region.dim(),
                        r.map.dim()
                    )));
                }
            }
        }
        if let Some(d) = &domain {
            if d.dim() != dim {
                return Err(PwaError::InvalidSystem(format!(
                    "domain dimension {} differs from layout {dim}",
                    d.dim()
                )));
            }
        }
        Ok(Self {
            layout,
            dt,
            tf,
            steps,
            domain,
        })
    }

    pub fn layout(&self) -> StateLayout {
        self.layout
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn tf(&self) -> f64 {
        self.tf
    }

    pub fn num_steps(&self) -> usize {
        self.steps.len()
    }

    pub fn steps(&self) -> &[Vec<PwaRegion>] {
        &self.steps
    }

    pub fn regions(&self, t: usize) -> &[PwaRegion] {
        &self.steps[t]
    }

    pub fn domain(&self) -> Option<&HPolytope> {
        self.domain.as_ref()
    }

    pub fn with_layout(mut self, layout: StateLayout) -> Result<Self> {
        if layout.total() != self.layout.total() {
            return Err(PwaError::InvalidLayout("total dimension must not change".into()));
        }
        self.layout = layout;
        Ok(self)
    }

    /// Smallest region index at timestep `t` containing `x` (boundary inclusive).
    pub fn mode_of(&self, t: usize, x: &DVector<f64>) -> Result<usize> {
        let regions = self
            .steps
            .get(t)
            .ok_or_else(|| PwaError::InvalidSystem(format!("timestep {t} out of range")))?;
        for (i, r) in regions.iter().enumerate() {
            if r.region.contains(x, MODE_TOL)? {
                return Ok(i);
            }
        }
        Err(PwaError::OutOfDomain { step: t })
    }

    /// Checks that every index is valid for its timestep.
    pub fn validate_sequence(&self, s: &ModeSequence) -> Result<()> {
        if s.len() != self.num_steps() {
            return Err(PwaError::InvalidSystem(format!(
                "mode sequence has {} entries, system has {} timesteps",
                s.len(),
                self.num_steps()
            )));
        }
        for (t, &m) in s.modes.iter().enumerate() {
            if m >= self.steps[t].len() {
                return Err(PwaError::InvalidSystem(format!(
                    "mode {m} at timestep {t} exceeds region count {}",
                    self.steps[t].len()
                )));
            }
        }
        Ok(())
    }

    /// Affine map of mode `s_t` at timestep `t`.
    pub fn map(&self, t: usize, mode: usize) -> &AffineMap {
        &self.steps[t][mode].map
    }

    /// Mode sequence of the rollout from `x0`; errors at the first timestep
    /// whose state leaves every region.
    pub fn mode_sequence(&self, x0: &DVector<f64>) -> Result<ModeSequence> {
        let mut x = x0.clone();
        let mut modes = Vec::with_capacity(self.num_steps());
        for t in 0..self.num_steps() {
            let m = self.mode_of(t, &x)?;
            modes.push(m);
            x = self.steps[t][m].map.apply(&x);
        }
        Ok(ModeSequence { modes })
    }

    /// Rolls out the PWA dynamics. A state outside every region is advanced
    /// with the least-violated region and reported in `exited_at`.
    pub fn rollout(&self, x0: &DVector<f64>, substeps: usize) -> Result<Rollout> {
        let mut x = x0.clone();
        let mut states = vec![x.clone()];
        let mut modes = Vec::with_capacity(self.num_steps());
        let mut exited_at = None;
        for t in 0..self.num_steps() {
            let m = match self.mode_of(t, &x) {
                Ok(m) => m,
                Err(PwaError::OutOfDomain { .. }) => {
                    exited_at.get_or_insert(t);
                    self.closest_region(t, &x)?
                }
                Err(e) => return Err(e),
            };
            modes.push(m);
            x = self.steps[t][m].map.apply(&x);
            states.push(x.clone());
        }
        if exited_at.is_none() {
            if let Some(d) = &self.domain {
                if !d.contains(&x, tolerances().membership)? {
                    exited_at = Some(self.num_steps());
                }
            }
        }
        let samples = interpolate(&states, self.dt, substeps);
        Ok(Rollout {
            states,
            modes,
            samples,
            exited_at,
        })
    }

    /// Rollout under a fixed mode sequence, ignoring region membership.
    pub fn rollout_sequence(
        &self,
        s: &ModeSequence,
        x0: &DVector<f64>,
        substeps: usize,
    ) -> Result<Rollout> {
        self.validate_sequence(s)?;
        let mut x = x0.clone();
        let mut states = vec![x.clone()];
        for (t, &m) in s.modes.iter().enumerate() {
            x = self.steps[t][m].map.apply(&x);
            states.push(x.clone());
        }
        let samples = interpolate(&states, self.dt, substeps);
        Ok(Rollout {
            states,
            modes: s.modes.clone(),
            samples,
            exited_at: None,
        })
    }

    fn closest_region(&self, t: usize, x: &DVector<f64>) -> Result<usize> {
        let mut best = 0;
        let mut best_v = f64::INFINITY;
        for (i, r) in self.steps[t].iter().enumerate() {
            let v = r.region.max_violation(x)?;
            if v < best_v {
                best_v = v;
                best = i;
            }
        }
        Ok(best)
    }
}

/// Linear interpolation with `substeps` sub-intervals per interval. With
/// `substeps == 0` only the discrete states are returned.
pub fn interpolate(states: &[DVector<f64>], dt: f64, substeps: usize) -> Vec<(f64, DVector<f64>)> {
    let per = substeps.max(1);
    let mut out = Vec::with_capacity((states.len().saturating_sub(1)) * per + 1);
    for t in 0..states.len().saturating_sub(1) {
        let a = &states[t];
        let b = &states[t + 1];
        for s in 0..per {
            let g = s as f64 / per as f64;
            out.push(((t as f64 + g) * dt, a + (b - a) * g));
        }
    }
    if let Some(last) = states.last() {
        out.push(((states.len() - 1) as f64 * dt, last.clone()));
    }
    out
}

#[derive(Serialize, Deserialize)]
struct SystemRepr {
    layout: StateLayout,
    dt: f64,
    tf: f64,
    steps: Vec<Vec<PwaRegion>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    domain: Option<HPolytope>,
}

impl TryFrom<SystemRepr> for PwaSystem {
    type Error = PwaError;

    fn try_from(r: SystemRepr) -> Result<Self> {
        PwaSystem::new(r.layout, r.dt, r.tf, r.steps, r.domain)
    }
}

impl From<PwaSystem> for SystemRepr {
    fn from(s: PwaSystem) -> Self {
        SystemRepr {
            layout: s.layout,
            dt: s.dt,
            tf: s.tf,
            steps: s.steps,
            domain: s.domain,
        }
    }
}
