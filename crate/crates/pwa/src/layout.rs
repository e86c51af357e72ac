use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::error::{PwaError, Result};

/// Dimension bookkeeping for the augmented state `[w; k; p_other]`.
///
/// The first `n_eti` coordinates are the ones declared translation invariant;
/// they always include the workspace and parameter blocks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "LayoutRepr", into = "LayoutRepr")]
pub struct StateLayout {
    n_w: usize,
    n_k: usize,
    n_p_other: usize,
    n_eti: usize,
}

impl StateLayout {
    pub fn new(n_w: usize, n_k: usize, n_p_other: usize, n_eti: usize) -> Result<Self> {
        let total = n_w + n_k + n_p_other;
        if n_eti < n_w + n_k || n_eti > total {
            return Err(PwaError::InvalidLayout(format!(
                "n_eti = {n_eti} must lie in [{}, {total}]",
                n_w + n_k
            )));
        }
        Ok(Self {
            n_w,
            n_k,
            n_p_other,
            n_eti,
        })
    }

    /// Layout whose ETI block is exactly workspace plus parameters.
    pub fn minimal(n_w: usize, n_k: usize, n_p_other: usize) -> Self {
        Self {
            n_w,
            n_k,
            n_p_other,
            n_eti: n_w + n_k,
        }
    }

    pub fn n_w(&self) -> usize {
        self.n_w
    }

    pub fn n_k(&self) -> usize {
        self.n_k
    }

    pub fn n_p_other(&self) -> usize {
        self.n_p_other
    }

    pub fn n_eti(&self) -> usize {
        self.n_eti
    }

    pub fn n_other(&self) -> usize {
        self.total() - self.n_eti
    }

    /// Planning-state dimension `n_w + n_p_other`.
    pub fn n_plan(&self) -> usize {
        self.n_w + self.n_p_other
    }

    pub fn total(&self) -> usize {
        self.n_w + self.n_k + self.n_p_other
    }

    pub fn with_n_eti(&self, n_eti: usize) -> Result<Self> {
        Self::new(self.n_w, self.n_k, self.n_p_other, n_eti)
    }

    /// Augmented index of planning coordinate `i` (order `[w; p_other]`).
    pub fn plan_index(&self, i: usize) -> usize {
        if i < self.n_w {
            i
        } else {
            i + self.n_k
        }
    }

    /// Builds `[w; k; p_other]` from a planning state `[w; p_other]` and `k`.
    pub fn augment(&self, p: &DVector<f64>, k: &DVector<f64>) -> DVector<f64> {
        let mut x = DVector::zeros(self.total());
        for i in 0..self.n_plan() {
            x[self.plan_index(i)] = p[i];
        }
        x.rows_mut(self.n_w, self.n_k).copy_from(k);
        x
    }

    /// Planning state `[w; p_other]` of an augmented state.
    pub fn plan_part(&self, x: &DVector<f64>) -> DVector<f64> {
        DVector::from_fn(self.n_plan(), |i, _| x[self.plan_index(i)])
    }

    pub fn k_part(&self, x: &DVector<f64>) -> DVector<f64> {
        x.rows(self.n_w, self.n_k).into_owned()
    }
}

#[derive(Serialize, Deserialize)]
struct LayoutRepr {
    n_w: usize,
    n_k: usize,
    n_p_other: usize,
    n_eti: usize,
}

impl TryFrom<LayoutRepr> for StateLayout {
    type Error = PwaError;

    fn try_from(r: LayoutRepr) -> Result<Self> {
        StateLayout::new(r.n_w, r.n_k, r.n_p_other, r.n_eti)
    }
}

impl From<StateLayout> for LayoutRepr {
    fn from(l: StateLayout) -> Self {
        LayoutRepr {
            n_w: l.n_w,
            n_k: l.n_k,
            n_p_other: l.n_p_other,
            n_eti: l.n_eti,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::dvector;

    #[test]
    fn augment_round_trip() {
        let l = StateLayout::minimal(2, 2, 1);
        let x = l.augment(&dvector![1.0, 2.0, 3.0], &dvector![4.0, 5.0]);
        assert_eq!(x, dvector![1.0, 2.0, 4.0, 5.0, 3.0]);
        assert_eq!(l.plan_part(&x), dvector![1.0, 2.0, 3.0]);
        assert_eq!(l.k_part(&x), dvector![4.0, 5.0]);
        assert_eq!(l.n_other(), 1);
    }

    #[test]
    fn eti_bounds_validated() {
        assert!(StateLayout::new(2, 2, 1, 3).is_err());
        assert!(StateLayout::new(2, 2, 1, 6).is_err());
        assert!(StateLayout::new(2, 2, 1, 5).is_ok());
    }
}
