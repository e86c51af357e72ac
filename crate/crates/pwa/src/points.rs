//! Linearization point generators.

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Tensor grid over the box `[lo, hi]` with `counts[i]` points on axis `i`
/// (endpoints included; a count of 1 uses the midpoint). The last axis varies
/// fastest.
pub fn grid_points(lo: &[f64], hi: &[f64], counts: &[usize]) -> Vec<DVector<f64>> {
    let n = lo.len();
    assert!(hi.len() == n && counts.len() == n, "grid spec dimensions differ");
    if counts.contains(&0) {
        return Vec::new();
    }
    let axis = |i: usize, j: usize| {
        if counts[i] == 1 {
            0.5 * (lo[i] + hi[i])
        } else {
            lo[i] + (hi[i] - lo[i]) * j as f64 / (counts[i] - 1) as f64
        }
    };
    let total: usize = counts.iter().product();
    (0..total)
        .map(|mut flat| {
            let mut x = DVector::zeros(n);
            for i in (0..n).rev() {
                x[i] = axis(i, flat % counts[i]);
                flat /= counts[i];
            }
            x
        })
        .collect()
}

/// `count` uniform samples from the box `[lo, hi]`.
pub fn uniform_points(lo: &[f64], hi: &[f64], count: usize, seed: u64) -> Vec<DVector<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            DVector::from_fn(lo.len(), |i, _| {
                if hi[i] > lo[i] {
                    rng.random_range(lo[i]..hi[i])
                } else {
                    lo[i]
                }
            })
        })
        .collect()
}
