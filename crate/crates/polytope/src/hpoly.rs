//! The H-polytope type and its LP-backed queries.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::affine::AffineMap;
use crate::error::{check_dim, PolytopeError, Result};
use crate::lp::{self, LpSolution};
use crate::tolerance::tolerances;

/// Convex set `{x | A x <= b}` in `dim` dimensions.
///
/// Rows are kept exactly as supplied; nothing is normalized unless an
/// operation documents it. A zero row `0·x <= b_i` is legal: with `b_i >= 0`
/// it is vacuous, with `b_i < 0` the polytope is empty.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "HPolytopeRepr", into = "HPolytopeRepr")]
pub struct HPolytope {
    a: DMatrix<f64>,
    b: DVector<f64>,
}

impl HPolytope {
    pub fn new(a: DMatrix<f64>, b: DVector<f64>) -> Result<Self> {
        check_dim(a.nrows(), b.len())?;
        if a.iter().chain(b.iter()).any(|v| !v.is_finite()) {
            return Err(PolytopeError::InvalidInput(
                "polytope data must be finite".into(),
            ));
        }
        Ok(Self { a, b })
    }

    pub fn from_rows(dim: usize, rows: &[(Vec<f64>, f64)]) -> Result<Self> {
        let mut a = DMatrix::zeros(rows.len(), dim);
        let mut b = DVector::zeros(rows.len());
        for (i, (row, bi)) in rows.iter().enumerate() {
            check_dim(dim, row.len())?;
            for (j, v) in row.iter().enumerate() {
                a[(i, j)] = *v;
            }
            b[i] = *bi;
        }
        Self::new(a, b)
    }

    /// The whole of `R^dim` (no constraints).
    pub fn universe(dim: usize) -> Self {
        Self {
            a: DMatrix::zeros(0, dim),
            b: DVector::zeros(0),
        }
    }

    /// Canonical empty set: the single row `0·x <= -1`.
    pub fn empty(dim: usize) -> Self {
        Self {
            a: DMatrix::zeros(1, dim),
            b: DVector::from_element(1, -1.0),
        }
    }

    /// Axis-aligned box `lo <= x <= hi`, two rows per coordinate (upper first).
    /// `lo == hi` gives the paired rows of a degenerate `{c}` factor.
    pub fn from_bounds(lo: &[f64], hi: &[f64]) -> Result<Self> {
        check_dim(lo.len(), hi.len())?;
        let n = lo.len();
        let mut a = DMatrix::zeros(2 * n, n);
        let mut b = DVector::zeros(2 * n);
        for i in 0..n {
            if lo[i] > hi[i] {
                return Err(PolytopeError::InvalidInput(format!(
                    "box bound {i}: lo {} > hi {}",
                    lo[i], hi[i]
                )));
            }
            a[(2 * i, i)] = 1.0;
            b[2 * i] = hi[i];
            a[(2 * i + 1, i)] = -1.0;
            b[2 * i + 1] = -lo[i];
        }
        Self::new(a, b)
    }

    pub fn singleton(point: &DVector<f64>) -> Self {
        let p: Vec<f64> = point.iter().copied().collect();
        Self::from_bounds(&p, &p).expect("finite singleton")
    }

    pub fn dim(&self) -> usize {
        self.a.ncols()
    }

    pub fn num_constraints(&self) -> usize {
        self.a.nrows()
    }

    pub fn a(&self) -> &DMatrix<f64> {
        &self.a
    }

    pub fn b(&self) -> &DVector<f64> {
        &self.b
    }

    /// Rows whose coefficient vector is (numerically) zero.
    pub fn degenerate_rows(&self) -> Vec<usize> {
        (0..self.num_constraints())
            .filter(|&i| self.a.row(i).amax() <= 1e-14)
            .collect()
    }

    pub fn contains(&self, x: &DVector<f64>, tol: f64) -> Result<bool> {
        check_dim(self.dim(), x.len())?;
        Ok(self.max_violation_unchecked(x) <= tol)
    }

    /// Membership with the default tolerance.
    pub fn contains_point(&self, x: &DVector<f64>) -> Result<bool> {
        self.contains(x, tolerances().membership)
    }

    /// `max_i (a_i·x - b_i)`, or `-inf` with no rows.
    pub fn max_violation(&self, x: &DVector<f64>) -> Result<f64> {
        check_dim(self.dim(), x.len())?;
        Ok(self.max_violation_unchecked(x))
    }

    fn max_violation_unchecked(&self, x: &DVector<f64>) -> f64 {
        let mut worst = f64::NEG_INFINITY;
        for i in 0..self.num_constraints() {
            let v = self.a.row(i).dot(&x.transpose()) - self.b[i];
            if v > worst {
                worst = v;
            }
        }
        worst
    }

    /// Stacks the constraint rows of `self` over those of `other`.
    pub fn intersect(&self, other: &HPolytope) -> Result<HPolytope> {
        check_dim(self.dim(), other.dim())?;
        let n = self.dim();
        let (m1, m2) = (self.num_constraints(), other.num_constraints());
        let mut a = DMatrix::zeros(m1 + m2, n);
        a.view_mut((0, 0), (m1, n)).copy_from(&self.a);
        a.view_mut((m1, 0), (m2, n)).copy_from(&other.a);
        let mut b = DVector::zeros(m1 + m2);
        b.rows_mut(0, m1).copy_from(&self.b);
        b.rows_mut(m1, m2).copy_from(&other.b);
        Ok(HPolytope { a, b })
    }

    /// Block-diagonal stacking: `{[x; y] | x ∈ self, y ∈ other}`.
    pub fn cartesian_product(&self, other: &HPolytope) -> HPolytope {
        let (n1, n2) = (self.dim(), other.dim());
        let (m1, m2) = (self.num_constraints(), other.num_constraints());
        let mut a = DMatrix::zeros(m1 + m2, n1 + n2);
        a.view_mut((0, 0), (m1, n1)).copy_from(&self.a);
        a.view_mut((m1, n1), (m2, n2)).copy_from(&other.a);
        let mut b = DVector::zeros(m1 + m2);
        b.rows_mut(0, m1).copy_from(&self.b);
        b.rows_mut(m1, m2).copy_from(&other.b);
        HPolytope { a, b }
    }

    /// Preimage `{x | C x + d ∈ self}` = `P(A C, b - A d)`. `C` may be singular.
    pub fn inverse_affine_map(&self, map: &AffineMap) -> Result<HPolytope> {
        check_dim(self.dim(), map.dim())?;
        Ok(HPolytope {
            a: &self.a * map.matrix(),
            b: &self.b - &self.a * map.offset(),
        })
    }

    /// `{x + v | x ∈ self}`.
    pub fn translate(&self, v: &DVector<f64>) -> Result<HPolytope> {
        check_dim(self.dim(), v.len())?;
        Ok(HPolytope {
            a: self.a.clone(),
            b: &self.b + &self.a * v,
        })
    }

    /// Same set with every nonzero row scaled to unit Euclidean norm.
    pub fn normalized(&self) -> HPolytope {
        let mut out = self.clone();
        for i in 0..out.num_constraints() {
            let norm = out.a.row(i).norm();
            if norm > 1e-14 {
                out.a.row_mut(i).scale_mut(1.0 / norm);
                out.b[i] /= norm;
            }
        }
        out
    }

    /// Intersection with the world box `[-w, w]^n`.
    pub fn clip(&self, world: f64) -> HPolytope {
        let n = self.dim();
        let lo = vec![-world; n];
        let hi = vec![world; n];
        self.intersect(&HPolytope::from_bounds(&lo, &hi).expect("finite world box"))
            .expect("same dimension")
    }

    pub fn is_empty(&self) -> Result<bool> {
        if self.b.iter().enumerate().any(|(i, &bi)| {
            bi < -tolerances().lp && self.a.row(i).amax() <= 1e-14
        }) {
            return Ok(true);
        }
        if self.num_constraints() == 0 {
            return Ok(false);
        }
        lp::is_infeasible(&self.a, &self.b)
    }

    /// Center and radius of the largest inscribed ball, or `None` if empty.
    /// Radius is capped at `1e9`; a capped radius means "unbounded".
    pub fn chebyshev_center(&self) -> Result<Option<(DVector<f64>, f64)>> {
        if self.is_empty()? {
            return Ok(None);
        }
        if self.num_constraints() == 0 {
            return Ok(Some((DVector::zeros(self.dim()), 1e9)));
        }
        let (c, r) = lp::chebyshev_radius_capped(&self.a, &self.b, 1e9)?;
        Ok(Some((c, r.max(0.0))))
    }

    /// Support function `h(dir) = max_{x ∈ self} dir·x`.
    pub fn support(&self, dir: &DVector<f64>) -> Result<f64> {
        Ok(self.support_point(dir)?.1)
    }

    /// Maximizer and value of `dir·x` over the polytope.
    pub fn support_point(&self, dir: &DVector<f64>) -> Result<(DVector<f64>, f64)> {
        check_dim(self.dim(), dir.len())?;
        match lp::maximize(dir, &self.a, &self.b)? {
            LpSolution::Optimal { x, value } => Ok((x, value)),
            LpSolution::Infeasible => Err(PolytopeError::Empty),
            LpSolution::Unbounded => Err(PolytopeError::Unbounded),
        }
    }

    /// Tight per-coordinate bounds via `2n` LPs.
    pub fn bounding_box(&self) -> Result<(Vec<f64>, Vec<f64>)> {
        let n = self.dim();
        let mut lo = vec![0.0; n];
        let mut hi = vec![0.0; n];
        for i in 0..n {
            let mut e = DVector::zeros(n);
            e[i] = 1.0;
            hi[i] = self.support(&e)?;
            e[i] = -1.0;
            lo[i] = -self.support(&e)?;
        }
        Ok((lo, hi))
    }

    pub fn is_bounded(&self) -> Result<bool> {
        if self.is_empty()? {
            return Ok(true);
        }
        match self.bounding_box() {
            Ok(_) => Ok(true),
            Err(PolytopeError::Unbounded) => Ok(false),
            Err(e) => Err(e),
        }
    }

    /// Drops every constraint that does not cut the set.
    ///
    /// Rows are normalized first, exact duplicates collapse onto the tighter
    /// offset, then each remaining row is tested by maximizing it over the
    /// others. Survivors keep their relative order. An empty input returns the
    /// canonical [`HPolytope::empty`].
    pub fn remove_redundancy(&self) -> Result<HPolytope> {
        let n = self.dim();
        if self.is_empty()? {
            return Ok(HPolytope::empty(n));
        }
        let norm = self.normalized();
        let mut rows: Vec<(Vec<f64>, f64)> = Vec::new();
        'outer: for i in 0..norm.num_constraints() {
            if norm.a.row(i).amax() <= 1e-14 {
                continue;
            }
            let row: Vec<f64> = norm.a.row(i).iter().copied().collect();
            for (other, ob) in rows.iter_mut() {
                if other
                    .iter()
                    .zip(row.iter())
                    .all(|(p, q)| (p - q).abs() <= 1e-12)
                {
                    *ob = ob.min(norm.b[i]);
                    continue 'outer;
                }
            }
            rows.push((row, norm.b[i]));
        }
        let tol = tolerances().lp;
        let mut keep = vec![true; rows.len()];
        for i in 0..rows.len() {
            let others: Vec<usize> = (0..rows.len()).filter(|&j| j != i && keep[j]).collect();
            let mut a = DMatrix::zeros(others.len() + 1, n);
            let mut b = DVector::zeros(others.len() + 1);
            for (r, &j) in others.iter().enumerate() {
                for k in 0..n {
                    a[(r, k)] = rows[j].0[k];
                }
                b[r] = rows[j].1;
            }
            for k in 0..n {
                a[(others.len(), k)] = rows[i].0[k];
            }
            b[others.len()] = rows[i].1 + 1.0;
            let dir = DVector::from_vec(rows[i].0.clone());
            match lp::maximize(&dir, &a, &b)? {
                LpSolution::Optimal { value, .. } => {
                    if value <= rows[i].1 + tol {
                        keep[i] = false;
                    }
                }
                LpSolution::Infeasible => {
                    return Err(PolytopeError::Numerical(
                        "redundancy LP infeasible on a nonempty polytope".into(),
                    ))
                }
                LpSolution::Unbounded => {
                    return Err(PolytopeError::Numerical(
                        "redundancy LP unbounded despite relaxed row".into(),
                    ))
                }
            }
        }
        let kept: Vec<(Vec<f64>, f64)> = rows
            .into_iter()
            .zip(keep)
            .filter_map(|(r, k)| k.then_some(r))
            .collect();
        HPolytope::from_rows(n, &kept)
    }

    /// True if every coordinate is bounded by rows of the form `±e_i·x <= c`
    /// only, returning the box bounds.
    pub fn as_box(&self) -> Option<(Vec<f64>, Vec<f64>)> {
        let n = self.dim();
        let mut lo = vec![f64::NEG_INFINITY; n];
        let mut hi = vec![f64::INFINITY; n];
        for i in 0..self.num_constraints() {
            let row = self.a.row(i);
            let nz: Vec<usize> = (0..n).filter(|&j| row[j] != 0.0).collect();
            if nz.len() != 1 {
                return None;
            }
            let j = nz[0];
            let v = row[j];
            if v > 0.0 {
                hi[j] = hi[j].min(self.b[i] / v);
            } else {
                lo[j] = lo[j].max(self.b[i] / v);
            }
        }
        if lo.iter().chain(hi.iter()).all(|v| v.is_finite()) {
            Some((lo, hi))
        } else {
            None
        }
    }
}

#[derive(Serialize, Deserialize)]
struct HPolytopeRepr {
    #[serde(rename = "A")]
    a: Vec<Vec<f64>>,
    b: Vec<f64>,
    dim: usize,
}

impl TryFrom<HPolytopeRepr> for HPolytope {
    type Error = PolytopeError;

    fn try_from(r: HPolytopeRepr) -> Result<Self> {
        if r.a.len() != r.b.len() {
            return Err(PolytopeError::InvalidInput(format!(
                "\"A\" has {} rows but \"b\" has {} entries",
                r.a.len(),
                r.b.len()
            )));
        }
        if let Some(row) = r.a.iter().find(|row| row.len() != r.dim) {
            return Err(PolytopeError::InvalidInput(format!(
                "row of length {} in a {}-dimensional polytope",
                row.len(),
                r.dim
            )));
        }
        let a = DMatrix::from_fn(r.a.len(), r.dim, |i, j| r.a[i][j]);
        HPolytope::new(a, DVector::from_vec(r.b))
    }
}

impl From<HPolytope> for HPolytopeRepr {
    fn from(p: HPolytope) -> Self {
        HPolytopeRepr {
            a: (0..p.num_constraints())
                .map(|i| p.a.row(i).iter().copied().collect())
                .collect(),
            b: p.b.iter().copied().collect(),
            dim: p.dim(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::{dmatrix, dvector};

    fn square(r: f64) -> HPolytope {
        HPolytope::from_bounds(&[-r, -r], &[r, r]).unwrap()
    }

    #[test]
    fn intersect_boxes() {
        let p = square(1.0);
        let q = HPolytope::from_bounds(&[0.0, 0.0], &[2.0, 2.0]).unwrap();
        let r = p.intersect(&q).unwrap();
        assert_eq!(r.num_constraints(), 8);
        assert_eq!(r.as_box().unwrap(), (vec![0.0, 0.0], vec![1.0, 1.0]));
        assert_eq!(p.intersect(&HPolytope::universe(2)).unwrap(), p);
        let i1 = HPolytope::from_bounds(&[-1.0], &[0.0]).unwrap();
        let i2 = HPolytope::from_bounds(&[1.0], &[2.0]).unwrap();
        assert!(i1.intersect(&i2).unwrap().is_empty().unwrap());
        assert!(matches!(
            p.intersect(&i1),
            Err(PolytopeError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn membership() {
        let p = square(1.0);
        assert!(p.contains_point(&dvector![0.0, 0.0]).unwrap());
        assert!(!p.contains_point(&dvector![2.0, 0.0]).unwrap());
        assert!(p.contains(&dvector![1.0, 1.0], 1e-9).unwrap());
        assert!(p.contains_point(&dvector![0.0]).is_err());
    }

    #[test]
    fn emptiness() {
        assert!(!HPolytope::from_bounds(&[-1.0], &[1.0]).unwrap().is_empty().unwrap());
        let p = HPolytope::new(dmatrix![1.0; -1.0], dvector![-1.0, -1.0]).unwrap();
        assert!(p.is_empty().unwrap());
        assert!(HPolytope::empty(3).is_empty().unwrap());
        assert!(!HPolytope::universe(2).is_empty().unwrap());
        // a lower-dimensional set is not empty
        let seg = HPolytope::from_bounds(&[0.0, 1.0], &[2.0, 1.0]).unwrap();
        assert!(!seg.is_empty().unwrap());
    }

    #[test]
    fn chebyshev_center_of_simplex_3d() {
        // x >= 0, sum x <= 1: inradius 1 / (3 + sqrt 3)
        let mut rows = vec![];
        for i in 0..3 {
            let mut r = vec![0.0; 3];
            r[i] = -1.0;
            rows.push((r, 0.0));
        }
        rows.push((vec![1.0, 1.0, 1.0], 1.0));
        let p = HPolytope::from_rows(3, &rows).unwrap();
        let (c, r) = p.chebyshev_center().unwrap().unwrap();
        let expect = 1.0 / (3.0 + 3f64.sqrt());
        assert!((r - expect).abs() < 1e-12);
        assert!((c - DVector::from_element(3, expect)).amax() < 1e-12);
    }

    #[test]
    fn support_values() {
        let p = square(1.0);
        assert!((p.support(&dvector![1.0, 0.0]).unwrap() - 1.0).abs() < 1e-12);
        assert!((p.support(&dvector![1.0, 1.0]).unwrap() - 2.0).abs() < 1e-12);
        let tri = HPolytope::from_rows(
            2,
            &[(vec![-1.0, 0.0], 0.0), (vec![0.0, -1.0], 0.0), (vec![1.0, 1.0], 1.0)],
        )
        .unwrap();
        assert!((tri.support(&dvector![1.0, 2.0]).unwrap() - 2.0).abs() < 1e-12);
        let half = HPolytope::from_rows(1, &[(vec![-1.0], 0.0)]).unwrap();
        assert_eq!(half.support(&dvector![1.0]), Err(PolytopeError::Unbounded));
    }

    #[test]
    fn inverse_affine_identity_and_scaling() {
        let p = square(1.0);
        assert_eq!(p.inverse_affine_map(&AffineMap::identity(2)).unwrap(), p);
        let i = HPolytope::from_bounds(&[-1.0], &[1.0]).unwrap();
        let m = AffineMap::new(dmatrix![2.0], dvector![0.0]).unwrap();
        let pre = i.inverse_affine_map(&m).unwrap();
        assert_eq!(pre.as_box().unwrap(), (vec![-0.5], vec![0.5]));
    }

    #[test]
    fn redundancy_removal() {
        let mut rows = vec![];
        for _ in 0..2 {
            rows.push((vec![1.0, 0.0], 1.0));
            rows.push((vec![-1.0, 0.0], 1.0));
            rows.push((vec![0.0, 1.0], 1.0));
            rows.push((vec![0.0, -1.0], 1.0));
        }
        rows.push((vec![1.0, 1.0], 5.0));
        let p = HPolytope::from_rows(2, &rows).unwrap();
        let r = p.remove_redundancy().unwrap();
        assert_eq!(r.num_constraints(), 4);
        assert_eq!(square(1.0).remove_redundancy().unwrap(), square(1.0));
    }

    #[test]
    fn json_round_trip() {
        let p = HPolytope::from_rows(2, &[(vec![1.0, 0.1], 0.3), (vec![-1.0, 2.0], 1e-17)]).unwrap();
        let s = serde_json::to_string(&p).unwrap();
        assert!(s.contains("\"A\"") && s.contains("\"dim\":2"));
        let q: HPolytope = serde_json::from_str(&s).unwrap();
        assert_eq!(p, q);
        let bad = r#"{"A": [[1.0]], "b": [1.0, 2.0], "dim": 1}"#;
        assert!(serde_json::from_str::<HPolytope>(bad).is_err());
    }
}
