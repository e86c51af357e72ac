use nalgebra::{DMatrix, DVector};
use parc_polytope::{convex_hull_pair, lp, minkowski_sum, project, tolerances, HPolytope};
use parc_pwa::{eti_residual, ModeSequence, PwaSystem};

use crate::error::{CoreError, Result};

/// Whether `obstacle` meets `conv(Ω_t ∪ Ω_next)`. A `false` answer certifies
/// that no segment from `Ω_t` to `Ω_next` touches the obstacle.
///
/// Decided by one LP over the homogenized hull
/// `{u + v | A_1 u <= λ b_1, A_2 v <= (1 - λ) b_2, 0 <= λ <= 1}`.
pub fn collision_filter(omega_t: &HPolytope, omega_next: &HPolytope, obstacle: &HPolytope) -> Result<bool> {
    let n = omega_t.dim();
    if omega_next.dim() != n || obstacle.dim() != n {
        return Err(CoreError::InvalidInput("filter operands differ in dimension".into()));
    }
    let (a1, b1) = (omega_t.a(), omega_t.b());
    let (a2, b2) = (omega_next.a(), omega_next.b());
    let (ao, bo) = (obstacle.a(), obstacle.b());
    let (m1, m2, mo) = (a1.nrows(), a2.nrows(), ao.nrows());
    let rows = m1 + m2 + mo + 2;
    let cols = 2 * n + 1;
    let mut a = DMatrix::zeros(rows, cols);
    let mut b = DVector::zeros(rows);
    for i in 0..m1 {
        for j in 0..n {
            a[(i, j)] = a1[(i, j)];
        }
        a[(i, 2 * n)] = -b1[i];
    }
    for i in 0..m2 {
        for j in 0..n {
            a[(m1 + i, n + j)] = a2[(i, j)];
        }
        a[(m1 + i, 2 * n)] = b2[i];
        b[m1 + i] = b2[i];
    }
    for i in 0..mo {
        for j in 0..n {
            a[(m1 + m2 + i, j)] = ao[(i, j)];
            a[(m1 + m2 + i, n + j)] = ao[(i, j)];
        }
        b[m1 + m2 + i] = bo[i];
    }
    a[(rows - 2, 2 * n)] = 1.0;
    b[rows - 2] = 1.0;
    a[(rows - 1, 2 * n)] = -1.0;
    Ok(!lp::is_infeasible(&a, &b)?)
}

/// Intermediate avoid set for one obstacle at timestep `t`.
///
/// With `A = {x | (C x + d)_ETI ∈ proj_ETI(O)}` restricted to the box that
/// bounds the non-ETI coordinates of `Ω_t` (and `domain_other` when given),
/// returns `(conv(proj_ETI(A), proj_ETI(O)) × ℝ^{n_other}) ∩ Ω_t`.
pub fn intermediate_avoid(
    system: &PwaSystem,
    s: &ModeSequence,
    t: usize,
    omega_t: &HPolytope,
    obstacle: &HPolytope,
    n_eti: usize,
    domain_other: Option<&HPolytope>,
) -> Result<HPolytope> {
    system.validate_sequence(s)?;
    let n = system.layout().total();
    if omega_t.dim() != n || obstacle.dim() != n || n_eti > n {
        return Err(CoreError::InvalidInput("avoid-set operands differ in dimension".into()));
    }
    let n_other = n - n_eti;
    let map = system.map(t, s.modes[t]);
    let eti: Vec<usize> = (0..n_eti).collect();
    if !eti_residual(map, &eti).passes() {
        return Err(CoreError::EtiViolation { step: t, region: s.modes[t], n_eti });
    }
    if omega_t.is_empty()? {
        return Ok(HPolytope::empty(n));
    }
    let o_eti = project(obstacle, 0..n_eti)?;
    if o_eti.is_empty()? {
        return Ok(HPolytope::empty(n));
    }
    let lifted = pad_columns(&o_eti, n);
    let mut a_set = lifted.inverse_affine_map(map)?;
    if n_other > 0 {
        let (lo, hi) = omega_t.clip(tolerances().world).bounding_box()?;
        let mut blo = vec![-tolerances().world; n];
        let mut bhi = vec![tolerances().world; n];
        blo[n_eti..].copy_from_slice(&lo[n_eti..]);
        bhi[n_eti..].copy_from_slice(&hi[n_eti..]);
        a_set = a_set.intersect(&HPolytope::from_bounds(&blo, &bhi)?)?;
        if let Some(dom) = domain_other {
            if dom.dim() != n_other {
                return Err(CoreError::InvalidInput("domain_other dimension mismatch".into()));
            }
            a_set = a_set.intersect(&HPolytope::universe(n_eti).cartesian_product(dom))?;
        }
    }
    let a_eti = project(&a_set.clip(tolerances().world), 0..n_eti)?;
    let hull = convex_hull_pair(&a_eti, &o_eti)?;
    Ok(pad_columns(&hull, n).intersect(omega_t)?.remove_redundancy()?)
}

/// `P × ℝ^{n - dim P}` with zero trailing columns.
fn pad_columns(p: &HPolytope, n: usize) -> HPolytope {
    p.cartesian_product(&HPolytope::universe(n - p.dim()))
}

/// Pulls an intermediate avoid set back to timestep 0 through the maps of
/// `s_{t-1}, ..., s_0`.
pub fn avoid_chain(system: &PwaSystem, s: &ModeSequence, lambda_tt: &HPolytope, t: usize) -> Result<HPolytope> {
    system.validate_sequence(s)?;
    let mut cur = lambda_tt.clone();
    for j in (0..t).rev() {
        cur = cur.inverse_affine_map(system.map(j, s.modes[j]))?;
    }
    Ok(cur)
}

/// Obstacle inflated by the interval error set, `O ⊕ Ē_t`.
pub fn buffer_obstacle(obstacle: &HPolytope, ebar: &HPolytope) -> Result<HPolytope> {
    Ok(minkowski_sum(obstacle, ebar)?)
}
