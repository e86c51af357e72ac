use nalgebra::{DMatrix, DVector};
use parc_polytope::{tolerances, AffineMap, HPolytope};
use rayon::prelude::*;

use crate::error::{PwaError, Result};
use crate::layout::StateLayout;
use crate::system::{step_count, PwaRegion, PwaSystem};

/// Continuous-time parameterized planning model `ṗ = f(t, p, k)` with the
/// planning state ordered `[w; p_other]`.
pub trait PlanningModel: Send + Sync {
    fn layout(&self) -> StateLayout;

    fn f_plan(&self, t: f64, p: &DVector<f64>, k: &DVector<f64>) -> Result<DVector<f64>>;

    /// Jacobians `(∂f/∂p, ∂f/∂k)`. Defaults to central differences.
    fn jacobian(
        &self,
        t: f64,
        p: &DVector<f64>,
        k: &DVector<f64>,
    ) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
        finite_difference_jacobian(self, t, p, k)
    }

    /// Exact affine one-step map on the augmented state over `[t, t + dt]`,
    /// for models that are already affine.
    fn exact_step(&self, _t: f64, _dt: f64) -> Option<AffineMap> {
        None
    }
}

/// How the one-step map is obtained from the model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Discretization {
    /// The model's exact affine step when it has one, otherwise Euler.
    #[default]
    Auto,
    /// Always linearize the forward-Euler step.
    Euler,
}

pub fn finite_difference_jacobian<M: PlanningModel + ?Sized>(
    model: &M,
    t: f64,
    p: &DVector<f64>,
    k: &DVector<f64>,
) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    let n = p.len();
    let nk = k.len();
    let mut jp = DMatrix::zeros(n, n);
    let mut jk = DMatrix::zeros(n, nk);
    for j in 0..n {
        let h = 1e-6 * p[j].abs().max(1.0);
        let mut a = p.clone();
        let mut b = p.clone();
        a[j] += h;
        b[j] -= h;
        let col = (model.f_plan(t, &a, k)? - model.f_plan(t, &b, k)?) / (2.0 * h);
        jp.set_column(j, &col);
    }
    for j in 0..nk {
        let h = 1e-6 * k[j].abs().max(1.0);
        let mut a = k.clone();
        let mut b = k.clone();
        a[j] += h;
        b[j] -= h;
        let col = (model.f_plan(t, p, &a)? - model.f_plan(t, p, &b)?) / (2.0 * h);
        jk.set_column(j, &col);
    }
    Ok((jp, jk))
}

/// Forward-Euler step of the augmented state, `k` held constant.
pub fn euler_step<M: PlanningModel + ?Sized>(
    model: &M,
    t: f64,
    dt: f64,
    x: &DVector<f64>,
) -> Result<DVector<f64>> {
    let l = model.layout();
    let p = l.plan_part(x);
    let k = l.k_part(x);
    let f = model.f_plan(t, &p, &k)?;
    let mut out = x.clone();
    for i in 0..l.n_plan() {
        out[l.plan_index(i)] += dt * f[i];
    }
    Ok(out)
}

/// Taylor expansion of the Euler step about `x_star`: `C = ∂g/∂x`,
/// `d = g(x*) - C x*`.
pub fn linearize_euler<M: PlanningModel + ?Sized>(
    model: &M,
    t: f64,
    dt: f64,
    x_star: &DVector<f64>,
) -> Result<AffineMap> {
    let l = model.layout();
    let p = l.plan_part(x_star);
    let k = l.k_part(x_star);
    let (jp, jk) = model.jacobian(t, &p, &k)?;
    let n = l.total();
    if jp.shape() != (l.n_plan(), l.n_plan()) || jk.shape() != (l.n_plan(), l.n_k()) {
        return Err(PwaError::Model("Jacobian has the wrong shape".into()));
    }
    let mut c: DMatrix<f64> = DMatrix::identity(n, n);
    for i in 0..l.n_plan() {
        let row = l.plan_index(i);
        for j in 0..l.n_plan() {
            c[(row, l.plan_index(j))] += dt * jp[(i, j)];
        }
        for j in 0..l.n_k() {
            c[(row, l.n_w() + j)] += dt * jk[(i, j)];
        }
    }
    if c.iter().any(|v: &f64| !v.is_finite()) {
        return Err(PwaError::Model("non-finite Jacobian".into()));
    }
    let g = euler_step(model, t, dt, x_star)?;
    let d = g - &c * x_star;
    Ok(AffineMap::new(c, d)?)
}

/// Voronoi cells of `points` clipped to `domain`, with rows
/// `(2x_j - 2x_i)ᵀ x <= |x_j|² - |x_i|²` before the domain rows.
pub fn voronoi_regions(points: &[DVector<f64>], domain: &HPolytope) -> Result<Vec<HPolytope>> {
    if points.is_empty() {
        return Err(PwaError::InvalidSystem("no linearization points".into()));
    }
    let n = domain.dim();
    let tol = tolerances().dedup;
    for (i, p) in points.iter().enumerate() {
        if p.len() != n {
            return Err(PwaError::InvalidSystem(format!(
                "linearization point {i} has dimension {}, domain {n}",
                p.len()
            )));
        }
        for (j, q) in points.iter().enumerate().skip(i + 1) {
            if (p - q).amax() <= tol {
                return Err(PwaError::DuplicatePoint { first: i, second: j });
            }
        }
    }
    points
        .par_iter()
        .enumerate()
        .map(|(i, xi)| {
            let mut rows = Vec::with_capacity(points.len() - 1);
            for (j, xj) in points.iter().enumerate() {
                if j == i {
                    continue;
                }
                let a: Vec<f64> = (xj - xi).iter().map(|v| 2.0 * v).collect();
                rows.push((a, xj.norm_squared() - xi.norm_squared()));
            }
            let cell = HPolytope::from_rows(n, &rows)?.intersect(domain)?;
            Ok(cell.remove_redundancy()?)
        })
        .collect()
}

/// Builds the PWA system from Voronoi cells of the linearization points.
///
/// `points_per_step` holds one list per timestep, or a single list shared
/// by all timesteps.
pub fn affinize<M: PlanningModel + ?Sized>(
    model: &M,
    points_per_step: &[Vec<DVector<f64>>],
    domain: &HPolytope,
    dt: f64,
    tf: f64,
    discretization: Discretization,
) -> Result<PwaSystem> {
    let layout = model.layout();
    let n = step_count(dt, tf)?;
    if domain.dim() != layout.total() {
        return Err(PwaError::InvalidSystem(format!(
            "domain dimension {} differs from layout {}",
            domain.dim(),
            layout.total()
        )));
    }
    if points_per_step.len() != n && points_per_step.len() != 1 {
        return Err(PwaError::InvalidSystem(format!(
            "{} point lists for {n} timesteps",
            points_per_step.len()
        )));
    }
    let shared = if points_per_step.len() == 1 {
        Some(voronoi_regions(&points_per_step[0], domain)?)
    } else {
        None
    };
    let steps: Vec<Vec<PwaRegion>> = (0..n)
        .into_par_iter()
        .map(|t| {
            let time = t as f64 * dt;
            let pts = if shared.is_some() { &points_per_step[0] } else { &points_per_step[t] };
            let cells = match &shared {
                Some(c) => c.clone(),
                None => voronoi_regions(pts, domain)?,
            };
            let exact = match discretization {
                Discretization::Auto => model.exact_step(time, dt),
                Discretization::Euler => None,
            };
            cells
                .into_iter()
                .zip(pts)
                .map(|(region, x_star)| {
                    let map = match &exact {
                        Some(m) => m.clone(),
                        None => linearize_euler(model, time, dt, x_star)?,
                    };
                    Ok(PwaRegion { region, map })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    PwaSystem::new(layout, dt, tf, steps, Some(domain.clone()))
}
