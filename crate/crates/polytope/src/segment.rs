use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Result};
use crate::hpoly::HPolytope;
use crate::tolerance::tolerances;

/// Straight segment `{x + γ (y - x) | γ ∈ [0, 1]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub x: DVector<f64>,
    pub y: DVector<f64>,
}

impl Segment {
    pub fn new(x: DVector<f64>, y: DVector<f64>) -> Result<Self> {
        check_dim(x.len(), y.len())?;
        Ok(Self { x, y })
    }

    pub fn at(&self, gamma: f64) -> DVector<f64> {
        &self.x + (&self.y - &self.x) * gamma
    }
}

/// Whether the segment meets `P` (boundary contact within the membership
/// tolerance counts).
pub fn segment_intersects(p: &HPolytope, s: &Segment) -> Result<bool> {
    segment_intersects_tol(p, s, tolerances().membership)
}

/// Each row restricts `γ` to a half-line; the segment meets `P` iff the
/// intersection of those half-lines with `[0, 1]` is nonempty.
pub fn segment_intersects_tol(p: &HPolytope, s: &Segment, tol: f64) -> Result<bool> {
    check_dim(p.dim(), s.x.len())?;
    check_dim(p.dim(), s.y.len())?;
    let dir = &s.y - &s.x;
    let ax = p.a() * &s.x;
    let ad = p.a() * &dir;
    let mut lo = 0.0f64;
    let mut hi = 1.0f64;
    for i in 0..p.num_constraints() {
        let r = p.b()[i] + tol - ax[i];
        let c = ad[i];
        if c.abs() <= 1e-15 {
            if r < 0.0 {
                return Ok(false);
            }
        } else if c > 0.0 {
            hi = hi.min(r / c);
        } else {
            lo = lo.max(r / c);
        }
        if lo > hi {
            return Ok(false);
        }
    }
    Ok(true)
}
