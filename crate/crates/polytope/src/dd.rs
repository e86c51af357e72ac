//! Double description method for the extreme rays of a pointed cone
//! `{y | M y >= 0}`.

use nalgebra::{DMatrix, DVector};

use crate::error::{PolytopeError, Result};

const SIGN_EPS: f64 = 1e-9;
const RANK_EPS: f64 = 1e-10;

#[derive(Clone)]
struct Ray {
    v: DVector<f64>,
    zeros: Vec<u64>,
}

fn bit_set(bits: &mut [u64], i: usize) {
    bits[i / 64] |= 1 << (i % 64);
}

fn and_bits(a: &[u64], b: &[u64]) -> Vec<u64> {
    a.iter().zip(b).map(|(x, y)| x & y).collect()
}

fn count_bits(a: &[u64]) -> usize {
    a.iter().map(|w| w.count_ones() as usize).sum()
}

fn is_superset(sup: &[u64], sub: &[u64]) -> bool {
    sup.iter().zip(sub).all(|(p, q)| p & q == *q)
}

fn normalize(v: &mut DVector<f64>) {
    let n = v.norm();
    if n > 0.0 {
        v.scale_mut(1.0 / n);
    }
}

/// Extreme rays of `{y | M y >= 0}`, each scaled to unit Euclidean norm.
///
/// The cone must be pointed (`M` of full column rank); otherwise
/// [`PolytopeError::Numerical`] is returned. Rows are processed in index order
/// so the output order is a deterministic function of `M`.
pub fn extreme_rays(m: &DMatrix<f64>) -> Result<Vec<DVector<f64>>> {
    let d = m.ncols();
    if d == 0 {
        return Ok(Vec::new());
    }
    let mut rows: Vec<DVector<f64>> = Vec::with_capacity(m.nrows());
    for i in 0..m.nrows() {
        let mut r: DVector<f64> = m.row(i).transpose();
        if r.norm() <= 1e-14 {
            continue;
        }
        normalize(&mut r);
        rows.push(r);
    }
    let nrows = rows.len();
    let words = nrows.div_ceil(64).max(1);

    // Greedy choice of d independent rows by largest residual.
    let mut basis: Vec<DVector<f64>> = Vec::with_capacity(d);
    let mut chosen: Vec<usize> = Vec::with_capacity(d);
    for _ in 0..d {
        let mut best = None;
        let mut best_norm = RANK_EPS;
        for (i, r) in rows.iter().enumerate() {
            if chosen.contains(&i) {
                continue;
            }
            let mut res = r.clone();
            for q in &basis {
                let c = q.dot(&res);
                res.axpy(-c, q, 1.0);
            }
            let n = res.norm();
            if n > best_norm {
                best_norm = n;
                best = Some((i, res));
            }
        }
        match best {
            Some((i, mut res)) => {
                normalize(&mut res);
                basis.push(res);
                chosen.push(i);
            }
            None => {
                return Err(PolytopeError::Numerical(
                    "cone is not pointed (constraint matrix rank deficient)".into(),
                ))
            }
        }
    }
    chosen.sort_unstable();

    let ms = DMatrix::from_fn(d, d, |r, c| rows[chosen[r]][c]);
    let inv = ms.try_inverse().ok_or_else(|| {
        PolytopeError::Numerical("singular initial basis in double description".into())
    })?;
    let mut rays: Vec<Ray> = (0..d)
        .map(|j| {
            let mut v: DVector<f64> = inv.column(j).into_owned();
            normalize(&mut v);
            let mut zeros = vec![0u64; words];
            for (r, &row) in chosen.iter().enumerate() {
                if r != j {
                    bit_set(&mut zeros, row);
                }
            }
            Ray { v, zeros }
        })
        .collect();

    for (ri, a) in rows.iter().enumerate() {
        if chosen.binary_search(&ri).is_ok() {
            continue;
        }
        let vals: Vec<f64> = rays.iter().map(|r| a.dot(&r.v)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&k| vals[k] > SIGN_EPS).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&k| vals[k] < -SIGN_EPS).collect();
        if neg.is_empty() {
            for (k, ray) in rays.iter_mut().enumerate() {
                if vals[k].abs() <= SIGN_EPS {
                    bit_set(&mut ray.zeros, ri);
                }
            }
            continue;
        }
        let mut created = Vec::new();
        for &p in &pos {
            for &n in &neg {
                let common = and_bits(&rays[p].zeros, &rays[n].zeros);
                if count_bits(&common) + 2 < d {
                    continue;
                }
                let adjacent = (0..rays.len())
                    .all(|k| k == p || k == n || !is_superset(&rays[k].zeros, &common));
                if !adjacent {
                    continue;
                }
                let mut v = &rays[n].v * vals[p] - &rays[p].v * vals[n];
                normalize(&mut v);
                let mut zeros = common;
                bit_set(&mut zeros, ri);
                created.push(Ray { v, zeros });
            }
        }
        let mut next: Vec<Ray> = Vec::with_capacity(rays.len() + created.len());
        for (k, mut ray) in rays.into_iter().enumerate() {
            if vals[k] < -SIGN_EPS {
                continue;
            }
            if vals[k].abs() <= SIGN_EPS {
                bit_set(&mut ray.zeros, ri);
            }
            next.push(ray);
        }
        next.extend(created);
        rays = next;
    }
    Ok(rays.into_iter().map(|r| r.v).collect())
}
