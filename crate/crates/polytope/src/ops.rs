//! Set operations that need more than row stacking.

use std::ops::Range;

use nalgebra::{DMatrix, DVector};

use crate::error::{check_dim, PolytopeError, Result};
use crate::hpoly::HPolytope;
use crate::vrep::{hull_from_points, vertex_enumeration};

fn singleton_point(p: &HPolytope) -> Option<DVector<f64>> {
    let (lo, hi) = p.as_box()?;
    lo.iter()
        .zip(&hi)
        .all(|(l, h)| l == h)
        .then(|| DVector::from_vec(lo))
}

/// `P ⊕ Q = {x + y | x ∈ P, y ∈ Q}`.
///
/// Boxes are summed bound by bound and singletons become translations;
/// everything else goes through vertex sums and a convex hull, so both
/// operands must then be bounded.
pub fn minkowski_sum(p: &HPolytope, q: &HPolytope) -> Result<HPolytope> {
    check_dim(p.dim(), q.dim())?;
    if p.is_empty()? || q.is_empty()? {
        return Ok(HPolytope::empty(p.dim()));
    }
    if let Some(v) = singleton_point(q) {
        if v.iter().all(|&c| c == 0.0) {
            return Ok(p.clone());
        }
        return p.translate(&v);
    }
    if let Some(v) = singleton_point(p) {
        if v.iter().all(|&c| c == 0.0) {
            return Ok(q.clone());
        }
        return q.translate(&v);
    }
    if let (Some((l1, h1)), Some((l2, h2))) = (p.as_box(), q.as_box()) {
        let lo: Vec<f64> = l1.iter().zip(&l2).map(|(a, b)| a + b).collect();
        let hi: Vec<f64> = h1.iter().zip(&h2).map(|(a, b)| a + b).collect();
        return HPolytope::from_bounds(&lo, &hi);
    }
    let vp = vertex_enumeration(p)?;
    let vq = vertex_enumeration(q)?;
    let mut sums = Vec::with_capacity(vp.len() * vq.len());
    for x in vp.vertices() {
        for y in vq.vertices() {
            sums.push(x + y);
        }
    }
    hull_from_points(&sums)
}

/// `P ⊖ Q = {x | x + Q ⊆ P}`, row offsets reduced by the support of `Q`.
/// An empty `Q` leaves `P` unchanged.
pub fn pontryagin_diff(p: &HPolytope, q: &HPolytope) -> Result<HPolytope> {
    check_dim(p.dim(), q.dim())?;
    if q.is_empty()? {
        return Ok(p.clone());
    }
    if let Some(v) = singleton_point(q) {
        if v.iter().all(|&c| c == 0.0) {
            return Ok(p.clone());
        }
        return p.translate(&(-v));
    }
    let boxed = q.as_box();
    let mut b = p.b().clone();
    for i in 0..p.num_constraints() {
        let a: DVector<f64> = p.a().row(i).transpose();
        let h = match &boxed {
            Some((lo, hi)) => a
                .iter()
                .zip(lo.iter().zip(hi))
                .map(|(c, (l, h))| (c * l).max(c * h))
                .sum(),
            None => q.support(&a)?,
        };
        b[i] -= h;
    }
    HPolytope::new(p.a().clone(), b)
}

/// Convex hull of two bounded polytopes. An empty operand yields the other.
pub fn convex_hull_pair(p: &HPolytope, q: &HPolytope) -> Result<HPolytope> {
    check_dim(p.dim(), q.dim())?;
    let pe = p.is_empty()?;
    let qe = q.is_empty()?;
    match (pe, qe) {
        (true, true) => return Ok(HPolytope::empty(p.dim())),
        (true, false) => return Ok(q.clone()),
        (false, true) => return Ok(p.clone()),
        _ => {}
    }
    let mut pts = vertex_enumeration(p)?.into_vertices();
    pts.extend(vertex_enumeration(q)?.into_vertices());
    hull_from_points(&pts)
}

/// Image of `P` under selection of the coordinates in `dims` (0-based,
/// half-open), by Fourier–Motzkin elimination with redundancy removal after
/// every eliminated coordinate.
pub fn project(p: &HPolytope, dims: Range<usize>) -> Result<HPolytope> {
    let n = p.dim();
    if dims.start > dims.end || dims.end > n {
        return Err(PolytopeError::InvalidInput(format!(
            "projection range {}..{} invalid for dimension {n}",
            dims.start, dims.end
        )));
    }
    let k = dims.len();
    if p.is_empty()? {
        return Ok(HPolytope::empty(k));
    }
    if k == n {
        return Ok(p.clone());
    }
    if let Some((lo, hi)) = p.as_box() {
        return HPolytope::from_bounds(&lo[dims.clone()], &hi[dims]);
    }
    let mut cur = p.remove_redundancy()?;
    let mut keep: Vec<usize> = (0..n).collect();
    for j in (0..n).rev().filter(|j| !dims.contains(j)) {
        let col = keep.iter().position(|&c| c == j).expect("column present");
        cur = eliminate(&cur, col)?.remove_redundancy()?;
        keep.remove(col);
    }
    Ok(cur)
}

fn eliminate(p: &HPolytope, col: usize) -> Result<HPolytope> {
    let n = p.dim();
    let a = p.a();
    let b = p.b();
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    let mut zero = Vec::new();
    for i in 0..p.num_constraints() {
        let c = a[(i, col)];
        if c > 1e-12 {
            pos.push(i);
        } else if c < -1e-12 {
            neg.push(i);
        } else {
            zero.push(i);
        }
    }
    let mut rows: Vec<(DVector<f64>, f64)> = Vec::new();
    for &i in &zero {
        rows.push((a.row(i).transpose(), b[i]));
    }
    for &i in &pos {
        for &j in &neg {
            let ci = a[(i, col)];
            let cj = -a[(j, col)];
            let row = a.row(i).transpose() / ci + a.row(j).transpose() / cj;
            rows.push((row, b[i] / ci + b[j] / cj));
        }
    }
    let mut out = DMatrix::zeros(rows.len(), n - 1);
    let mut rhs = DVector::zeros(rows.len());
    for (r, (row, off)) in rows.iter().enumerate() {
        let mut c = 0;
        for jj in 0..n {
            if jj == col {
                continue;
            }
            out[(r, c)] = row[jj];
            c += 1;
        }
        rhs[r] = *off;
    }
    HPolytope::new(out, rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::dvector;

    fn bx(lo: &[f64], hi: &[f64]) -> HPolytope {
        HPolytope::from_bounds(lo, hi).unwrap()
    }

    #[test]
    fn box_sum_and_difference() {
        let p = bx(&[-1.0, -1.0], &[1.0, 1.0]);
        let q = bx(&[-0.25, -0.25], &[0.25, 0.25]);
        let s = minkowski_sum(&p, &q).unwrap();
        assert_eq!(s.as_box().unwrap(), (vec![-1.25, -1.25], vec![1.25, 1.25]));
        let d = pontryagin_diff(&bx(&[-2.0], &[2.0]), &bx(&[-1.0], &[1.0])).unwrap();
        assert_eq!(d.as_box().unwrap(), (vec![-1.0], vec![1.0]));
        let zero = bx(&[0.0, 0.0], &[0.0, 0.0]);
        assert_eq!(minkowski_sum(&p, &zero).unwrap(), p);
        assert_eq!(pontryagin_diff(&p, &zero).unwrap(), p);
        assert_eq!(pontryagin_diff(&p, &HPolytope::empty(2)).unwrap(), p);
    }

    #[test]
    fn hull_of_intervals_and_idempotence() {
        let h = convex_hull_pair(&bx(&[-1.0], &[0.0]), &bx(&[2.0], &[3.0])).unwrap();
        assert!(h.contains_point(&dvector![1.0]).unwrap());
        assert!(!h.contains_point(&dvector![3.1]).unwrap());
        assert!(!h.contains_point(&dvector![-1.1]).unwrap());
        let p = bx(&[0.0, 0.0], &[1.0, 1.0]);
        let pp = convex_hull_pair(&p, &p).unwrap();
        for v in vertex_enumeration(&pp).unwrap().vertices() {
            assert!(p.contains_point(v).unwrap());
        }
    }

    #[test]
    fn shifted_square_hull() {
        let p = bx(&[0.0, 0.0], &[1.0, 1.0]);
        let q = bx(&[3.0, 3.0], &[4.0, 4.0]);
        let h = convex_hull_pair(&p, &q).unwrap();
        assert_eq!(h.num_constraints(), 6);
        assert!(h.contains_point(&dvector![2.0, 2.0]).unwrap());
        assert!(!h.contains_point(&dvector![0.0, 3.0]).unwrap());
    }

    #[test]
    fn projections() {
        let p = bx(&[-1.0, -1.0, -1.0], &[1.0, 1.0, 1.0]);
        let r = project(&p, 0..2).unwrap();
        assert_eq!(r.as_box().unwrap(), (vec![-1.0, -1.0], vec![1.0, 1.0]));
        let diamond = HPolytope::from_rows(
            2,
            &[
                (vec![1.0, 1.0], 1.0),
                (vec![1.0, -1.0], 1.0),
                (vec![-1.0, 1.0], 1.0),
                (vec![-1.0, -1.0], 1.0),
            ],
        )
        .unwrap();
        let r = project(&diamond, 0..1).unwrap();
        assert_eq!(r.num_constraints(), 2);
        assert!((r.support(&dvector![1.0]).unwrap() - 1.0).abs() < 1e-12);
        assert!((r.support(&dvector![-1.0]).unwrap() - 1.0).abs() < 1e-12);
        assert!(project(&HPolytope::empty(3), 1..2).unwrap().is_empty().unwrap());
        assert!(project(&p, 2..4).is_err());
    }

    #[test]
    fn triangle_minkowski_with_box() {
        let tri = HPolytope::from_rows(
            2,
            &[(vec![-1.0, 0.0], 0.0), (vec![0.0, -1.0], 0.0), (vec![1.0, 1.0], 1.0)],
        )
        .unwrap();
        let s = minkowski_sum(&tri, &bx(&[-0.1, -0.1], &[0.1, 0.1])).unwrap();
        assert!(s.contains_point(&dvector![0.6, 0.6]).unwrap());
        assert!(!s.contains_point(&dvector![0.61, 0.61]).unwrap());
        assert!(s.contains_point(&dvector![-0.1, -0.1]).unwrap());
    }
}
