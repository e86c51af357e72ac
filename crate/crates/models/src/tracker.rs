use nalgebra::DVector;
use parc_core::TrajectoryPair;
use parc_pwa::{PwaError, PwaSystem};
use serde::{Deserialize, Serialize};

use crate::error::{ModelError, Result};

/// Feedback gains of the toy unicycle tracker.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrackerGains {
    /// Along-track position gain.
    pub k_x: f64,
    /// Cross-track position gain.
    pub k_y: f64,
    pub k_theta: f64,
    /// Speed-loop gain.
    pub k_v: f64,
}

impl Default for TrackerGains {
    fn default() -> Self {
        Self { k_x: 2.0, k_y: 4.0, k_theta: 3.0, k_v: 5.0 }
    }
}

impl TrackerGains {
    pub fn scaled(&self, s: f64) -> Self {
        Self { k_x: s * self.k_x, k_y: s * self.k_y, k_theta: s * self.k_theta, k_v: s * self.k_v }
    }
}

/// Piecewise-linear reference through grid states `[p_x, p_y, θ]`.
struct Reference<'a> {
    plan: &'a [DVector<f64>],
    dt: f64,
}

impl Reference<'_> {
    /// Pose and feedforward `(v, ω)` at time `s`.
    fn at(&self, s: f64) -> ([f64; 3], f64, f64) {
        let n = self.plan.len() - 1;
        let j = ((s / self.dt).floor().max(0.0) as usize).min(n - 1);
        let a = &self.plan[j];
        let b = &self.plan[j + 1];
        let f = (s / self.dt - j as f64).clamp(0.0, 1.0);
        let pose = [a[0] + f * (b[0] - a[0]), a[1] + f * (b[1] - a[1]), a[2] + f * (b[2] - a[2])];
        let v = ((b[0] - a[0]).powi(2) + (b[1] - a[1]).powi(2)).sqrt() / self.dt;
        (pose, v, (b[2] - a[2]) / self.dt)
    }
}

fn wrap(a: f64) -> f64 {
    (a + std::f64::consts::PI).rem_euclid(2.0 * std::f64::consts::PI) - std::f64::consts::PI
}

/// Unicycle `[x, y, θ, v]` driven by a Kanayama-style law toward the reference.
fn dynamics(z: [f64; 4], s: f64, r: &Reference, g: &TrackerGains) -> [f64; 4] {
    let ([xr, yr, thr], vr, wr) = r.at(s);
    let (sn, cs) = z[2].sin_cos();
    let (dx, dy) = (xr - z[0], yr - z[1]);
    let ex = cs * dx + sn * dy;
    let ey = -sn * dx + cs * dy;
    let eth = wrap(thr - z[2]);
    let v_cmd = vr * eth.cos() + g.k_x * ex;
    let w = wr + vr * (g.k_y * ey + g.k_theta * eth.sin());
    [z[3] * cs, z[3] * sn, w, g.k_v * (v_cmd - z[3])]
}

fn rk4(z: [f64; 4], s: f64, h: f64, r: &Reference, g: &TrackerGains) -> [f64; 4] {
    let add = |a: [f64; 4], b: [f64; 4], c: f64| [a[0] + c * b[0], a[1] + c * b[1], a[2] + c * b[2], a[3] + c * b[3]];
    let k1 = dynamics(z, s, r, g);
    let k2 = dynamics(add(z, k1, h / 2.0), s + h / 2.0, r, g);
    let k3 = dynamics(add(z, k2, h / 2.0), s + h / 2.0, r, g);
    let k4 = dynamics(add(z, k3, h), s + h, r, g);
    std::array::from_fn(|i| z[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
}

/// Tracks the plan through grid states `plan` (planning coordinates
/// `[p_x, p_y, θ]` at multiples of `dt`) from `z0 = [x, y, θ, v]` and returns
/// plan and realized poses sampled every `sim_dt`.
pub fn toy_unicycle_tracker(
    plan: &[DVector<f64>],
    dt: f64,
    k: &[f64],
    gains: TrackerGains,
    z0: [f64; 4],
    sim_dt: f64,
) -> Result<TrajectoryPair> {
    if plan.len() < 2 || plan.iter().any(|p| p.len() != 3) {
        return Err(ModelError::InvalidParams("plan needs at least two poses [p_x, p_y, θ]".into()));
    }
    let g = [gains.k_x, gains.k_y, gains.k_theta, gains.k_v];
    if g.iter().any(|v| !v.is_finite() || *v < 0.0) {
        return Err(ModelError::InvalidParams("gains must be finite and nonnegative".into()));
    }
    if !(dt > 0.0 && sim_dt > 0.0 && sim_dt <= dt / 10.0 + 1e-12) {
        return Err(ModelError::InvalidParams(format!("sim_dt {sim_dt} must be positive and at most dt / 10")));
    }
    let per = (dt / sim_dt).round() as usize;
    if ((per as f64) * sim_dt - dt).abs() > 1e-9 {
        return Err(ModelError::InvalidParams(format!("sim_dt {sim_dt} must divide dt {dt}")));
    }
    let r = Reference { plan, dt };
    let h = dt / per as f64;
    let total = (plan.len() - 1) * per;
    let mut z = z0;
    let mut out = TrajectoryPair { k: k.to_vec(), t: Vec::new(), plan: Vec::new(), realized: Vec::new() };
    for i in 0..=total {
        let s = (i / per) as f64 * dt + (i % per) as f64 * h;
        let (pose, _, _) = r.at(s);
        out.t.push(s);
        out.plan.push(pose.to_vec());
        out.realized.push(vec![z[0], z[1], z[2]]);
        if i < total {
            z = rk4(z, s, h, &r, &gains);
        }
    }
    Ok(out)
}

/// Rolls out the PWA plan from the augmented start `x0` and tracks it from
/// the plan's initial pose with initial speed `v0`. Plans whose planning
/// state is not `[p_x, p_y, θ]` or that leave the domain are rejected.
pub fn track_pwa_plan(
    system: &PwaSystem,
    x0: &DVector<f64>,
    gains: TrackerGains,
    v0: f64,
    sim_dt: f64,
) -> Result<TrajectoryPair> {
    let l = system.layout();
    if l.n_plan() != 3 || l.n_w() != 2 {
        return Err(ModelError::InvalidParams("the tracker needs planning states [p_x, p_y, θ]".into()));
    }
    let r = system.rollout(x0, 0)?;
    if let Some(step) = r.exited_at {
        return Err(ModelError::Pwa(PwaError::OutOfDomain { step }));
    }
    let plan: Vec<DVector<f64>> = r.states.iter().map(|x| l.plan_part(x)).collect();
    let p = &plan[0];
    toy_unicycle_tracker(&plan, system.dt(), l.k_part(x0).as_slice(), gains, [p[0], p[1], p[2], v0], sim_dt)
}
