use nalgebra::DVector;
use parc_polytope::{tolerances, HPolytope};
use parc_pwa::{step_count, StateLayout};
use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};

const TIME_TOL: f64 = 1e-9;

/// Planned and realized samples of one trajectory on a shared time grid.
/// Rows are planning-coordinate vectors `[w; p_other]` (the realized rows
/// restricted to the planning coordinates).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryPair {
    pub k: Vec<f64>,
    pub t: Vec<f64>,
    pub plan: Vec<Vec<f64>>,
    pub realized: Vec<Vec<f64>>,
}

/// Sampling record attached to an estimated profile. The envelopes bound the
/// true tracking error only as far as these samples cover the valid region.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorMeta {
    pub pairs: usize,
    pub samples: usize,
}

/// Per-coordinate workspace tracking-error bounds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorProfile {
    /// Final-time error per workspace coordinate.
    pub e_tf: Vec<f64>,
    /// Interval error per timestep and workspace coordinate.
    pub e_int: Vec<Vec<f64>>,
    /// Box over the augmented state on which the bounds are valid.
    pub valid_region: HPolytope,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub meta: Option<ErrorMeta>,
}

impl ErrorProfile {
    pub fn zeros(n_w: usize, steps: usize, valid_region: HPolytope) -> Self {
        Self {
            e_tf: vec![0.0; n_w],
            e_int: vec![vec![0.0; n_w]; steps],
            valid_region,
            meta: None,
        }
    }

    pub fn validate(&self, layout: &StateLayout, steps: usize) -> Result<()> {
        let n_w = layout.n_w();
        let bad = |m: String| Err(CoreError::InvalidInput(m));
        if self.e_tf.len() != n_w {
            return bad(format!("e_tf has {} entries, expected {n_w}", self.e_tf.len()));
        }
        if self.e_int.len() != steps || self.e_int.iter().any(|r| r.len() != n_w) {
            return bad(format!("e_int must be {steps} rows of {n_w} entries"));
        }
        let all = self.e_tf.iter().chain(self.e_int.iter().flatten());
        if all.clone().any(|e| !e.is_finite() || *e < 0.0) {
            return bad("error entries must be finite and nonnegative".into());
        }
        if self.valid_region.dim() != layout.total() {
            return bad("valid region dimension differs from the augmented state".into());
        }
        Ok(())
    }
}

/// Envelope of `|plan_i - realized_i|` over workspace coordinates: at the
/// final time, and over every sample in each closed interval `[t, t + dt]`.
pub fn estimate_error(
    pairs: &[TrajectoryPair],
    valid_region: &HPolytope,
    dt: f64,
    tf: f64,
    n_w: usize,
) -> Result<ErrorProfile> {
    let steps = step_count(dt, tf)?;
    if pairs.is_empty() {
        return Err(CoreError::InvalidInput("no trajectory pairs".into()));
    }
    let mut e_tf = vec![0.0f64; n_w];
    let mut e_int = vec![vec![0.0f64; n_w]; steps];
    let mut samples = 0;
    for (j, pair) in pairs.iter().enumerate() {
        check_pair(pair, j, dt, tf, steps, n_w)?;
        let start = augmented_start(pair, n_w);
        if start.len() != valid_region.dim() {
            return Err(CoreError::InvalidInput(format!(
                "pair {j}: augmented start has dimension {}, valid region {}",
                start.len(),
                valid_region.dim()
            )));
        }
        if !valid_region.contains(&start, tolerances().membership)? {
            return Err(CoreError::InvalidInput(format!("pair {j} starts outside the valid region")));
        }
        samples += pair.t.len();
        for (s, &t) in pair.t.iter().enumerate() {
            let err: Vec<f64> = (0..n_w).map(|i| (pair.plan[s][i] - pair.realized[s][i]).abs()).collect();
            let pos = t / dt;
            let lo = ((pos - TIME_TOL / dt).ceil().max(1.0) as usize - 1).min(steps - 1);
            let hi = ((pos + TIME_TOL / dt).floor() as usize).min(steps - 1);
            // the sample belongs to interval m when m*dt <= t <= (m+1)*dt
            for row in e_int.iter_mut().take(hi + 1).skip(lo) {
                for i in 0..n_w {
                    row[i] = row[i].max(err[i]);
                }
            }
            if (t - tf).abs() <= TIME_TOL {
                for i in 0..n_w {
                    e_tf[i] = e_tf[i].max(err[i]);
                }
            }
        }
    }
    Ok(ErrorProfile {
        e_tf,
        e_int,
        valid_region: valid_region.clone(),
        meta: Some(ErrorMeta { pairs: pairs.len(), samples }),
    })
}

fn augmented_start(pair: &TrajectoryPair, n_w: usize) -> DVector<f64> {
    let p = &pair.plan[0];
    let mut v = Vec::with_capacity(p.len() + pair.k.len());
    v.extend_from_slice(&p[..n_w]);
    v.extend_from_slice(&pair.k);
    v.extend_from_slice(&p[n_w..]);
    DVector::from_vec(v)
}

fn check_pair(pair: &TrajectoryPair, j: usize, dt: f64, tf: f64, steps: usize, n_w: usize) -> Result<()> {
    let mis = |m: String| Err(CoreError::Misaligned(format!("pair {j}: {m}")));
    if pair.t.is_empty() || pair.plan.len() != pair.t.len() || pair.realized.len() != pair.t.len() {
        return mis("t, plan and realized must have equal nonzero lengths".into());
    }
    let width = pair.plan[0].len();
    if width < n_w || pair.plan.iter().chain(&pair.realized).any(|r| r.len() != width) {
        return mis(format!("rows must all have the same width of at least {n_w}"));
    }
    if pair.t.windows(2).any(|w| w[1].partial_cmp(&w[0]) != Some(std::cmp::Ordering::Greater)) {
        return mis("timestamps must increase strictly".into());
    }
    if pair.t[0].abs() > TIME_TOL || (pair.t[pair.t.len() - 1] - tf).abs() > TIME_TOL {
        return mis(format!("timestamps must span [0, {tf}]"));
    }
    for m in 0..=steps {
        let g = m as f64 * dt;
        if !pair.t.iter().any(|&t| (t - g).abs() <= TIME_TOL) {
            return mis(format!("no sample at grid time {g}"));
        }
    }
    Ok(())
}

/// `E_tf` and `Ē_t`: boxes over the workspace coordinates with `{0}` factors
/// over the parameter and remaining planning coordinates.
pub fn error_sets(profile: &ErrorProfile, layout: &StateLayout) -> Result<(HPolytope, Vec<HPolytope>)> {
    let e_tf = error_box(&profile.e_tf, layout)?;
    let ebar = profile
        .e_int
        .iter()
        .map(|e| error_box(e, layout))
        .collect::<Result<Vec<_>>>()?;
    Ok((e_tf, ebar))
}

fn error_box(e: &[f64], layout: &StateLayout) -> Result<HPolytope> {
    let n = layout.total();
    let mut lo = vec![0.0; n];
    let mut hi = vec![0.0; n];
    for (i, &v) in e.iter().enumerate().take(layout.n_w()) {
        lo[i] = -v;
        hi[i] = v;
    }
    Ok(HPolytope::from_bounds(&lo, &hi)?)
}
