//! Dense simplex solver for `max c·x  s.t.  A x <= b` with free `x`.
//!
//! The kernel only ever solves LPs with few variables (n <= 10) and possibly
//! many constraints, so the solver works on the dual
//!
//! ```text
//! min b·y  s.t.  Aᵀ y = c,  y >= 0
//! ```
//!
//! whose tableau has only `n` rows. The primal point is read back from the
//! simplex multipliers of the final dual basis. Dual infeasibility means the
//! primal is unbounded or infeasible; a second zero-objective solve tells the
//! two apart.

use nalgebra::{DMatrix, DVector};

use crate::error::{PolytopeError, Result};
use crate::tolerance::tolerances;

const PIVOT_TOL: f64 = 1e-11;
const COST_TOL: f64 = 1e-11;
const DEGENERATE_SWITCH: usize = 25;
const REFACTOR_ROUNDS: usize = 4;

#[derive(Debug, Clone, PartialEq)]
pub enum LpSolution {
    Optimal { x: DVector<f64>, value: f64 },
    Infeasible,
    Unbounded,
}

impl LpSolution {
    pub fn optimal(self) -> Option<(DVector<f64>, f64)> {
        match self {
            LpSolution::Optimal { x, value } => Some((x, value)),
            _ => None,
        }
    }
}

/// Maximizes `c·x` over `{x | A x <= b}`.
///
/// Returns `Err(Numerical)` only when the simplex fails to terminate or
/// produces a point that grossly violates the constraints; infeasible and
/// unbounded problems are ordinary outcomes.
pub fn maximize(c: &DVector<f64>, a: &DMatrix<f64>, b: &DVector<f64>) -> Result<LpSolution> {
    let n = a.ncols();
    let m = a.nrows();
    if c.len() != n || b.len() != m {
        return Err(PolytopeError::InvalidInput(format!(
            "LP shapes: c {} / A {}x{} / b {}",
            c.len(),
            m,
            n,
            b.len()
        )));
    }
    let feas = tolerances().lp;

    // Row-normalize; drop zero rows after checking their consistency.
    let mut rows: Vec<(Vec<f64>, f64)> = Vec::with_capacity(m);
    for i in 0..m {
        let row = a.row(i);
        let norm = row.norm();
        if norm <= 1e-14 {
            if b[i] < -feas {
                return Ok(LpSolution::Infeasible);
            }
            continue;
        }
        rows.push((row.iter().map(|v| v / norm).collect(), b[i] / norm));
    }

    if n == 0 {
        return Ok(LpSolution::Optimal {
            x: DVector::zeros(0),
            value: 0.0,
        });
    }

    let c_norm = c.amax();
    let c_scaled: Vec<f64> = if c_norm > 0.0 {
        c.iter().map(|v| v / c_norm).collect()
    } else {
        vec![0.0; n]
    };

    match solve_dual(&c_scaled, &rows)? {
        DualOutcome::Optimal(x) => {
            let x = DVector::from_vec(x);
            let value = c.dot(&x);
            let worst = rows
                .iter()
                .map(|(r, bi)| r.iter().zip(x.iter()).map(|(p, q)| p * q).sum::<f64>() - bi)
                .fold(f64::NEG_INFINITY, f64::max);
            if worst > 1e-6 * (1.0 + x.amax()) {
                return Err(PolytopeError::Numerical(format!(
                    "simplex point violates constraints by {worst:e}"
                )));
            }
            Ok(LpSolution::Optimal { x, value })
        }
        DualOutcome::DualUnbounded => Ok(LpSolution::Infeasible),
        DualOutcome::DualInfeasible => {
            if c_norm == 0.0 {
                // Aᵀy = 0 is always feasible; cannot get here.
                return Err(PolytopeError::Numerical(
                    "zero-objective dual reported infeasible".into(),
                ));
            }
            match solve_dual(&vec![0.0; n], &rows)? {
                DualOutcome::Optimal(_) => Ok(LpSolution::Unbounded),
                DualOutcome::DualUnbounded => Ok(LpSolution::Infeasible),
                DualOutcome::DualInfeasible => Err(PolytopeError::Numerical(
                    "zero-objective dual reported infeasible".into(),
                )),
            }
        }
    }
}

/// Returns `true` if `{x | A x <= b}` has no point, deciding by the sign of the
/// capped Chebyshev radius (always a bounded, feasible LP).
pub fn is_infeasible(a: &DMatrix<f64>, b: &DVector<f64>) -> Result<bool> {
    let r = chebyshev_radius_capped(a, b, 1.0)?.1;
    Ok(r < -tolerances().lp)
}

/// Largest ball `{x + r u : |u| <= 1}` inside the polytope, radius capped at
/// `cap`. A negative radius means the polytope is empty.
pub fn chebyshev_radius_capped(
    a: &DMatrix<f64>,
    b: &DVector<f64>,
    cap: f64,
) -> Result<(DVector<f64>, f64)> {
    let n = a.ncols();
    let m = a.nrows();
    let mut big = DMatrix::zeros(m + 1, n + 1);
    let mut rhs = DVector::zeros(m + 1);
    for i in 0..m {
        let norm = a.row(i).norm();
        for j in 0..n {
            big[(i, j)] = a[(i, j)];
        }
        big[(i, n)] = norm;
        rhs[i] = b[i];
    }
    big[(m, n)] = 1.0;
    rhs[m] = cap;
    let mut c = DVector::zeros(n + 1);
    c[n] = 1.0;
    match maximize(&c, &big, &rhs)? {
        LpSolution::Optimal { x, value } => Ok((x.rows(0, n).into_owned(), value)),
        other => Err(PolytopeError::Numerical(format!(
            "Chebyshev LP must be feasible and bounded, got {other:?}"
        ))),
    }
}

enum DualOutcome {
    Optimal(Vec<f64>),
    DualInfeasible,
    DualUnbounded,
}

struct Tableau {
    ncols: usize, // including rhs
    data: Vec<f64>,
    basis: Vec<usize>,
}

impl Tableau {
    #[inline]
    fn get(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.ncols + c]
    }

    fn rhs(&self, r: usize) -> f64 {
        self.get(r, self.ncols - 1)
    }

    fn pivot(&mut self, pr: usize, pc: usize) {
        let w = self.ncols;
        let p = self.get(pr, pc);
        for c in 0..w {
            self.data[pr * w + c] /= p;
        }
        self.data[pr * w + pc] = 1.0;
        let nrows = self.basis.len();
        for r in 0..nrows {
            if r == pr {
                continue;
            }
            let f = self.get(r, pc);
            if f == 0.0 {
                continue;
            }
            for c in 0..w {
                let v = self.data[pr * w + c];
                if v != 0.0 {
                    self.data[r * w + c] -= f * v;
                }
            }
            self.data[r * w + pc] = 0.0;
            let rhs = &mut self.data[r * w + w - 1];
            if *rhs < 0.0 && *rhs > -1e-13 {
                *rhs = 0.0;
            }
        }
        self.basis[pr] = pc;
    }

    fn reduced_costs(&self, cost: &[f64], allowed: usize) -> Vec<f64> {
        let mut red: Vec<f64> = cost[..allowed].to_vec();
        for (r, &bc) in self.basis.iter().enumerate() {
            let cb = cost[bc];
            if cb == 0.0 {
                continue;
            }
            for (k, rk) in red.iter_mut().enumerate() {
                *rk -= cb * self.get(r, k);
            }
        }
        red
    }
}

enum PhaseEnd {
    Optimal,
    Unbounded,
}

/// Primal simplex on the tableau. Only columns `< allowed` may enter.
/// Returns the outcome and the number of pivots taken.
fn run_simplex(tab: &mut Tableau, cost: &[f64], allowed: usize) -> Result<(PhaseEnd, usize)> {
    let nrows = tab.basis.len();
    let max_iter = 200 * (allowed + nrows + 10);
    let mut degenerate = 0usize;
    let mut bland = false;
    for iter in 0..max_iter {
        let red = tab.reduced_costs(cost, allowed);
        let improving = |k: usize| red[k] < -COST_TOL * (1.0 + cost[k].abs());
        let entering = if bland {
            (0..allowed).find(|&k| improving(k))
        } else {
            let mut best = None;
            let mut best_val = 0.0;
            for k in (0..allowed).filter(|&k| improving(k)) {
                if red[k] < best_val {
                    best_val = red[k];
                    best = Some(k);
                }
            }
            best
        };
        let Some(k) = entering else {
            return Ok((PhaseEnd::Optimal, iter));
        };
        // Ratio test; near-ties go to the larger pivot element, then to the
        // lower basic index.
        let mut leave: Option<(usize, f64, f64)> = None;
        for r in 0..nrows {
            let t = tab.get(r, k);
            if t > PIVOT_TOL {
                let ratio = tab.rhs(r).max(0.0) / t;
                match leave {
                    None => leave = Some((r, ratio, t)),
                    Some((lr, lratio, lt)) => {
                        let tie = (ratio - lratio).abs() <= 1e-12 * (1.0 + lratio.abs());
                        let better = if tie {
                            if bland {
                                tab.basis[r] < tab.basis[lr]
                            } else {
                                t > lt
                            }
                        } else {
                            ratio < lratio
                        };
                        if better {
                            leave = Some((r, ratio, t));
                        }
                    }
                }
            }
        }
        let Some((r, ratio, _)) = leave else {
            return Ok((PhaseEnd::Unbounded, iter));
        };
        if ratio <= 1e-14 {
            degenerate += 1;
            if degenerate > DEGENERATE_SWITCH {
                bland = true;
            }
        } else {
            degenerate = 0;
        }
        tab.pivot(r, k);
    }
    Err(PolytopeError::Numerical("simplex iteration limit".into()))
}

/// Rebuilds the tableau as `B⁻¹ [M | rhs]` from the original data, discarding
/// accumulated rounding error.
fn refactor(tab: &mut Tableau, orig: &DMatrix<f64>) -> Result<()> {
    let n = tab.basis.len();
    let b = DMatrix::from_fn(n, n, |r, c| orig[(r, tab.basis[c])]);
    let inv = b
        .try_inverse()
        .ok_or_else(|| PolytopeError::Numerical("singular simplex basis".into()))?;
    let t = inv * orig;
    for r in 0..n {
        for c in 0..tab.ncols {
            tab.data[r * tab.ncols + c] = t[(r, c)];
        }
        let rhs = &mut tab.data[r * tab.ncols + tab.ncols - 1];
        if *rhs < 0.0 && *rhs > -1e-12 {
            *rhs = 0.0;
        }
        let col = tab.basis[r];
        for q in 0..n {
            tab.data[q * tab.ncols + col] = if q == r { 1.0 } else { 0.0 };
        }
    }
    Ok(())
}

fn solve_dual(c: &[f64], rows: &[(Vec<f64>, f64)]) -> Result<DualOutcome> {
    let n = c.len();
    let m = rows.len();
    let ncols = m + n + 1;
    let mut signs = vec![1.0; n];
    let mut orig = DMatrix::zeros(n, ncols);
    for j in 0..n {
        let s = if c[j] < 0.0 { -1.0 } else { 1.0 };
        signs[j] = s;
        for (i, (row, _)) in rows.iter().enumerate() {
            orig[(j, i)] = s * row[j];
        }
        orig[(j, m + j)] = 1.0;
        orig[(j, ncols - 1)] = s * c[j];
    }
    let mut data = vec![0.0; n * ncols];
    for j in 0..n {
        for k in 0..ncols {
            data[j * ncols + k] = orig[(j, k)];
        }
    }
    let mut tab = Tableau {
        ncols,
        data,
        basis: (m..m + n).collect(),
    };

    // Phase 1: minimize the sum of artificials.
    let mut cost1 = vec![0.0; m + n];
    for v in cost1.iter_mut().skip(m) {
        *v = 1.0;
    }
    for round in 0.. {
        let (_, pivots) = run_simplex(&mut tab, &cost1, m + n)?;
        if pivots == 0 || round == REFACTOR_ROUNDS {
            break;
        }
        refactor(&mut tab, &orig)?;
    }
    let infeas: f64 = tab
        .basis
        .iter()
        .enumerate()
        .filter(|(_, &bc)| bc >= m)
        .map(|(r, _)| tab.rhs(r))
        .sum();
    if infeas > 1e-9 {
        return Ok(DualOutcome::DualInfeasible);
    }
    // Drive zero-level artificials out of the basis where possible.
    for r in 0..n {
        if tab.basis[r] >= m {
            let mut best = None;
            let mut best_abs = 1e-9;
            for k in 0..m {
                let v = tab.get(r, k).abs();
                if v > best_abs {
                    best_abs = v;
                    best = Some(k);
                }
            }
            if let Some(k) = best {
                tab.pivot(r, k);
            }
        }
    }
    refactor(&mut tab, &orig)?;

    // Phase 2: min b·y, artificials barred from entering.
    let mut cost2 = vec![0.0; m + n];
    for (i, (_, bi)) in rows.iter().enumerate() {
        cost2[i] = *bi;
    }
    for round in 0.. {
        let (end, pivots) = run_simplex(&mut tab, &cost2, m)?;
        if let PhaseEnd::Unbounded = end {
            return Ok(DualOutcome::DualUnbounded);
        }
        if pivots > 0 || round == 0 {
            refactor(&mut tab, &orig)?;
        }
        if pivots == 0 || round == REFACTOR_ROUNDS {
            break;
        }
    }
    // x_j = sign_j * (c_B B⁻¹)_j with B⁻¹ sitting in the artificial block.
    let mut x = vec![0.0; n];
    for (r, &bc) in tab.basis.iter().enumerate() {
        let cb = cost2[bc];
        if cb == 0.0 {
            continue;
        }
        for (j, xj) in x.iter_mut().enumerate() {
            *xj += cb * tab.get(r, m + j);
        }
    }
    for (xj, s) in x.iter_mut().zip(signs.iter()) {
        *xj *= s;
    }
    Ok(DualOutcome::Optimal(x))
}
