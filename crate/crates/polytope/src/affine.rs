use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, PolytopeError, Result};

/// Affine map `x ↦ C x + d` with square `C`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "AffineMapRepr", into = "AffineMapRepr")]
pub struct AffineMap {
    c: DMatrix<f64>,
    d: DVector<f64>,
}

impl AffineMap {
    pub fn new(c: DMatrix<f64>, d: DVector<f64>) -> Result<Self> {
        if c.nrows() != c.ncols() {
            return Err(PolytopeError::InvalidInput(format!(
                "affine map matrix must be square, got {}x{}",
                c.nrows(),
                c.ncols()
            )));
        }
        check_dim(c.nrows(), d.len())?;
        Ok(Self { c, d })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            c: DMatrix::identity(n, n),
            d: DVector::zeros(n),
        }
    }

    pub fn dim(&self) -> usize {
        self.d.len()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.c
    }

    pub fn offset(&self) -> &DVector<f64> {
        &self.d
    }

    pub fn apply(&self, x: &DVector<f64>) -> DVector<f64> {
        &self.c * x + &self.d
    }

    /// `self ∘ inner`, i.e. `x ↦ self(inner(x))`.
    pub fn compose(&self, inner: &AffineMap) -> Result<AffineMap> {
        check_dim(self.dim(), inner.dim())?;
        Ok(AffineMap {
            c: &self.c * &inner.c,
            d: &self.c * &inner.d + &self.d,
        })
    }

    /// Block-diagonal map acting on `[x; y]`.
    pub fn block_diagonal(&self, other: &AffineMap) -> AffineMap {
        let n1 = self.dim();
        let n2 = other.dim();
        let mut c = DMatrix::zeros(n1 + n2, n1 + n2);
        c.view_mut((0, 0), (n1, n1)).copy_from(&self.c);
        c.view_mut((n1, n1), (n2, n2)).copy_from(&other.c);
        let mut d = DVector::zeros(n1 + n2);
        d.rows_mut(0, n1).copy_from(&self.d);
        d.rows_mut(n1, n2).copy_from(&other.d);
        AffineMap { c, d }
    }
}

#[derive(Serialize, Deserialize)]
struct AffineMapRepr {
    #[serde(rename = "C")]
    c: Vec<Vec<f64>>,
    d: Vec<f64>,
}

impl TryFrom<AffineMapRepr> for AffineMap {
    type Error = PolytopeError;

    fn try_from(r: AffineMapRepr) -> Result<Self> {
        let n = r.d.len();
        if r.c.len() != n || r.c.iter().any(|row| row.len() != n) {
            return Err(PolytopeError::InvalidInput(
                "affine map \"C\" must be square and match \"d\"".into(),
            ));
        }
        let c = DMatrix::from_fn(n, n, |i, j| r.c[i][j]);
        AffineMap::new(c, DVector::from_vec(r.d))
    }
}

impl From<AffineMap> for AffineMapRepr {
    fn from(m: AffineMap) -> Self {
        let n = m.dim();
        AffineMapRepr {
            c: (0..n).map(|i| m.c.row(i).iter().copied().collect()).collect(),
            d: m.d.iter().copied().collect(),
        }
    }
}
