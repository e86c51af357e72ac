#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use parc_polytope::HPolytope;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn unit_vector(rng: &mut ChaCha8Rng, n: usize) -> DVector<f64> {
    loop {
        let v = DVector::from_fn(n, |_, _| rng.sample::<f64, _>(StandardNormal));
        let norm = v.norm();
        if norm > 1e-3 {
            return v / norm;
        }
    }
}

/// `[-1,1]^n` cut by `cuts` random halfspaces that keep the ball of radius
/// 0.3 around the origin.
pub fn random_polytope(rng: &mut ChaCha8Rng, n: usize, cuts: usize) -> HPolytope {
    let mut p = HPolytope::from_bounds(&vec![-1.0; n], &vec![1.0; n]).unwrap();
    for _ in 0..cuts {
        let a = unit_vector(rng, n);
        let beta = rng.random_range(0.3..1.0);
        let cut = HPolytope::new(DMatrix::from_row_slice(1, n, a.as_slice()), DVector::from_element(1, beta))
            .unwrap();
        p = p.intersect(&cut).unwrap();
    }
    p
}

pub fn uniform_in_box(rng: &mut ChaCha8Rng, lo: &[f64], hi: &[f64]) -> DVector<f64> {
    DVector::from_fn(lo.len(), |i, _| rng.random_range(lo[i]..hi[i]))
}

/// Feasibility of `{z | M z <= r}` by LP, used as an independent oracle.
pub fn feasible(m: DMatrix<f64>, r: DVector<f64>) -> bool {
    !HPolytope::new(m, r).unwrap().is_empty().unwrap()
}

/// Whether `x` is a convex combination of `points` (LP over the weights).
pub fn in_convex_combination(points: &[DVector<f64>], x: &DVector<f64>) -> bool {
    let k = points.len();
    let n = x.len();
    let rows = 2 * n + 2 + k;
    let mut m = DMatrix::zeros(rows, k);
    let mut r = DVector::zeros(rows);
    for i in 0..n {
        for j in 0..k {
            m[(2 * i, j)] = points[j][i];
            m[(2 * i + 1, j)] = -points[j][i];
        }
        r[2 * i] = x[i] + 1e-9;
        r[2 * i + 1] = -x[i] + 1e-9;
    }
    for j in 0..k {
        m[(2 * n, j)] = 1.0;
        m[(2 * n + 1, j)] = -1.0;
        m[(2 * n + 2 + j, j)] = -1.0;
    }
    r[2 * n] = 1.0;
    r[2 * n + 1] = -1.0;
    feasible(m, r)
}
