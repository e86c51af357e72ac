//! Hit-and-run sampling in the relative interior of a polytope.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{PolytopeError, Result};
use crate::hpoly::HPolytope;
use crate::lp;

/// Steps discarded before the first sample.
const BURN_IN: usize = 20;
/// Steps taken between consecutive samples.
const THIN: usize = 5;

/// Hit-and-run walker. Implicit equalities are detected up front and the walk
/// runs in the affine hull, so lower-dimensional polytopes are supported.
pub struct HitAndRun {
    origin: DVector<f64>,
    basis: DMatrix<f64>,
    g: DMatrix<f64>,
    h: DVector<f64>,
    z: DVector<f64>,
    rng: ChaCha8Rng,
    started: bool,
}

impl HitAndRun {
    pub fn new(p: &HPolytope, seed: u64) -> Result<Self> {
        let Some((center, radius)) = p.chebyshev_center()? else {
            return Err(PolytopeError::Empty);
        };
        if !p.is_bounded()? {
            return Err(PolytopeError::Unbounded);
        }
        let n = p.dim();
        let norm = p.normalized();
        let mut eq_rows = Vec::new();
        let mut other_rows = Vec::new();
        for i in 0..norm.num_constraints() {
            let a: DVector<f64> = norm.a().row(i).transpose();
            if a.amax() <= 1e-14 {
                continue;
            }
            if radius <= 1e-9 {
                let lo = -norm.support(&(-&a))?;
                if norm.b()[i] - lo <= 1e-9 {
                    eq_rows.push(i);
                    continue;
                }
            }
            other_rows.push(i);
        }
        let basis = if eq_rows.is_empty() {
            DMatrix::identity(n, n)
        } else {
            let e = DMatrix::from_fn(eq_rows.len(), n, |r, c| norm.a()[(eq_rows[r], c)]);
            let eig = SymmetricEigen::new(e.transpose() * &e);
            let top = eig.eigenvalues.amax().max(1.0);
            let mut null: Vec<usize> = (0..n)
                .filter(|&k| eig.eigenvalues[k].abs() <= 1e-10 * top)
                .collect();
            null.sort_unstable();
            DMatrix::from_fn(n, null.len(), |r, c| eig.eigenvectors[(r, null[c])])
        };
        let k = basis.ncols();
        let g_full = DMatrix::from_fn(other_rows.len(), n, |r, c| norm.a()[(other_rows[r], c)]);
        let b_other = DVector::from_fn(other_rows.len(), |r, _| norm.b()[other_rows[r]]);
        let g = &g_full * &basis;
        let h = &b_other - &g_full * &center;
        let z = if k == 0 || g.nrows() == 0 {
            DVector::zeros(k)
        } else {
            let (zc, _) = lp::chebyshev_radius_capped(&g, &h, 1e9)?;
            zc
        };
        Ok(Self {
            origin: center,
            basis,
            g,
            h,
            z,
            rng: ChaCha8Rng::seed_from_u64(seed),
            started: false,
        })
    }

    fn point(&self) -> DVector<f64> {
        &self.origin + &self.basis * &self.z
    }

    fn step(&mut self) {
        let k = self.z.len();
        if k == 0 {
            return;
        }
        let mut u = DVector::from_fn(k, |_, _| self.rng.sample::<f64, _>(StandardNormal));
        let un = u.norm();
        if un == 0.0 {
            return;
        }
        u /= un;
        let gu = &self.g * &u;
        let slack = &self.h - &self.g * &self.z;
        let mut lo = f64::NEG_INFINITY;
        let mut hi = f64::INFINITY;
        for i in 0..gu.len() {
            let s = slack[i].max(0.0);
            if gu[i] > 1e-14 {
                hi = hi.min(s / gu[i]);
            } else if gu[i] < -1e-14 {
                lo = lo.max(s / gu[i]);
            }
        }
        if !(lo.is_finite() && hi.is_finite()) || hi <= lo {
            return;
        }
        let t = self.rng.random_range(lo..=hi);
        self.z.axpy(t, &u, 1.0);
    }

    /// Next sample of the walk.
    pub fn next_point(&mut self) -> DVector<f64> {
        let steps = if self.started { THIN } else { BURN_IN };
        self.started = true;
        for _ in 0..steps {
            self.step();
        }
        self.point()
    }
}

/// `n` hit-and-run samples started at the Chebyshev center, deterministic in
/// `seed`.
pub fn sample_interior(p: &HPolytope, n: usize, seed: u64) -> Result<Vec<DVector<f64>>> {
    let mut walk = HitAndRun::new(p, seed)?;
    Ok((0..n).map(|_| walk.next_point()).collect())
}
