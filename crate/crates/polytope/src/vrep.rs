//! Vertex representation, vertex enumeration and convex hulls of point sets.

use std::cmp::Ordering;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::dd::extreme_rays;
use crate::error::{PolytopeError, Result};
use crate::hpoly::HPolytope;
use crate::tolerance::tolerances;

/// Finite list of vertices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "VRepRepr", into = "VRepRepr")]
pub struct VRep {
    vertices: Vec<DVector<f64>>,
}

impl VRep {
    pub fn new(vertices: Vec<DVector<f64>>) -> Result<Self> {
        if let Some(first) = vertices.first() {
            let n = first.len();
            if let Some(v) = vertices.iter().find(|v| v.len() != n) {
                return Err(PolytopeError::DimensionMismatch {
                    expected: n,
                    found: v.len(),
                });
            }
        }
        Ok(Self { vertices })
    }

    pub fn vertices(&self) -> &[DVector<f64>] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn into_vertices(self) -> Vec<DVector<f64>> {
        self.vertices
    }
}

#[derive(Serialize, Deserialize)]
struct VRepRepr {
    vertices: Vec<Vec<f64>>,
}

impl TryFrom<VRepRepr> for VRep {
    type Error = PolytopeError;

    fn try_from(r: VRepRepr) -> Result<Self> {
        VRep::new(r.vertices.into_iter().map(DVector::from_vec).collect())
    }
}

impl From<VRep> for VRepRepr {
    fn from(v: VRep) -> Self {
        VRepRepr {
            vertices: v
                .vertices
                .into_iter()
                .map(|p| p.iter().copied().collect())
                .collect(),
        }
    }
}

fn lex_cmp(a: &DVector<f64>, b: &DVector<f64>) -> Ordering {
    for (x, y) in a.iter().zip(b.iter()) {
        match x.total_cmp(y) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    Ordering::Equal
}

/// Removes points within `tol` (max-norm) of an earlier point, then sorts
/// lexicographically.
pub fn dedup_sorted(points: Vec<DVector<f64>>, tol: f64) -> Vec<DVector<f64>> {
    let mut out: Vec<DVector<f64>> = Vec::with_capacity(points.len());
    for p in points {
        if !out.iter().any(|q| (q - &p).amax() <= tol) {
            out.push(p);
        }
    }
    out.sort_by(lex_cmp);
    out
}

/// All vertices of a bounded, nonempty polytope, lexicographically ordered.
pub fn vertex_enumeration(p: &HPolytope) -> Result<VRep> {
    let n = p.dim();
    if p.is_empty()? {
        return Err(PolytopeError::Empty);
    }
    if n == 0 {
        return VRep::new(vec![DVector::zeros(0)]);
    }
    let m = p.num_constraints();
    // cone {(λ, x) | λ >= 0, b_i λ - a_i·x >= 0}
    let mut cone = DMatrix::zeros(m + 1, n + 1);
    cone[(0, 0)] = 1.0;
    for i in 0..m {
        cone[(i + 1, 0)] = p.b()[i];
        for j in 0..n {
            cone[(i + 1, j + 1)] = -p.a()[(i, j)];
        }
    }
    let rays = match extreme_rays(&cone) {
        Ok(r) => r,
        Err(PolytopeError::Numerical(_)) => return Err(PolytopeError::Unbounded),
        Err(e) => return Err(e),
    };
    let mut verts = Vec::with_capacity(rays.len());
    for r in rays {
        if r[0] <= 1e-12 {
            return Err(PolytopeError::Unbounded);
        }
        verts.push(r.rows(1, n) / r[0]);
    }
    if verts.is_empty() {
        return Err(PolytopeError::Numerical("no vertices found".into()));
    }
    VRep::new(dedup_sorted(verts, tolerances().dedup))
}

/// H-representation of the convex hull of a finite point set.
///
/// Coordinates on which all points agree become paired rows; the remaining
/// coordinates are reduced to the affine hull before running double
/// description on the polar cone.
pub fn hull_from_points(points: &[DVector<f64>]) -> Result<HPolytope> {
    let Some(first) = points.first() else {
        return Err(PolytopeError::Empty);
    };
    let n = first.len();
    if let Some(v) = points.iter().find(|v| v.len() != n) {
        return Err(PolytopeError::DimensionMismatch {
            expected: n,
            found: v.len(),
        });
    }
    let points = dedup_sorted(points.to_vec(), 1e-12);
    let scale = points
        .iter()
        .map(|p| p.amax())
        .fold(1.0f64, f64::max);

    let mut fixed = Vec::new();
    let mut free = Vec::new();
    for j in 0..n {
        let (lo, hi) = points
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), p| (l.min(p[j]), h.max(p[j])));
        if hi - lo <= 1e-12 * scale {
            fixed.push((j, 0.5 * (lo + hi)));
        } else {
            free.push(j);
        }
    }

    let mut rows: Vec<(Vec<f64>, f64)> = Vec::new();
    let nf = free.len();
    if nf > 0 {
        let npts = points.len();
        let centroid = DVector::from_fn(nf, |k, _| {
            points.iter().map(|p| p[free[k]]).sum::<f64>() / npts as f64
        });
        let y = DMatrix::from_fn(npts, nf, |i, k| points[i][free[k]] - centroid[k]);
        let eig = SymmetricEigen::new(y.transpose() * &y);
        let mut order: Vec<usize> = (0..nf).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
        let top = eig.eigenvalues[order[0]].max(0.0).sqrt();
        let thresh = 1e-9 * top.max(scale);
        let span: Vec<usize> = order
            .iter()
            .copied()
            .filter(|&k| eig.eigenvalues[k].max(0.0).sqrt() > thresh)
            .collect();
        let perp: Vec<usize> = order
            .iter()
            .copied()
            .filter(|&k| eig.eigenvalues[k].max(0.0).sqrt() <= thresh)
            .collect();
        let kdim = span.len();
        let u = DMatrix::from_fn(nf, kdim, |r, c| eig.eigenvectors[(r, span[c])]);
        let lift = |coef: &DVector<f64>| -> Vec<f64> {
            let mut full = vec![0.0; n];
            for (k, &j) in free.iter().enumerate() {
                full[j] = coef[k];
            }
            full
        };

        if kdim > 0 {
            let z = &y * &u;
            let mut cone = DMatrix::zeros(npts, kdim + 1);
            for i in 0..npts {
                cone[(i, 0)] = 1.0;
                for c in 0..kdim {
                    cone[(i, c + 1)] = -z[(i, c)];
                }
            }
            let rays = extreme_rays(&cone)?;
            let mut facets: Vec<(DVector<f64>, f64)> = Vec::new();
            for r in rays {
                let a = r.rows(1, kdim).into_owned();
                let norm = a.norm();
                if norm <= 1e-12 {
                    continue;
                }
                let a = a / norm;
                let beta = r[0] / norm;
                let ax = &u * &a;
                let offset = beta + ax.dot(&centroid);
                facets.push((ax, offset));
            }
            let mut uniq: Vec<(DVector<f64>, f64)> = Vec::new();
            for f in facets {
                if !uniq
                    .iter()
                    .any(|g| (&g.0 - &f.0).amax() <= 1e-10 && (g.1 - f.1).abs() <= 1e-10 * scale)
                {
                    uniq.push(f);
                }
            }
            uniq.sort_by(|p, q| lex_cmp(&p.0, &q.0).then(p.1.total_cmp(&q.1)));
            for (ax, off) in uniq {
                rows.push((lift(&ax), off));
            }
        }
        for &k in &perp {
            let w = eig.eigenvectors.column(k).into_owned();
            let off = w.dot(&centroid);
            rows.push((lift(&w), off));
            rows.push((lift(&(-&w)), -off));
        }
    }
    for (j, c) in fixed {
        let mut e = vec![0.0; n];
        e[j] = 1.0;
        rows.push((e.clone(), c));
        e[j] = -1.0;
        rows.push((e, -c));
    }
    if rows.is_empty() {
        return Ok(HPolytope::universe(n));
    }
    HPolytope::from_rows(n, &rows)
}
