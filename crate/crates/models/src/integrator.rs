use nalgebra::{DMatrix, DVector};
use parc_polytope::{AffineMap, HPolytope};
use parc_pwa::{PlanningModel, PwaError, StateLayout};

/// Single integrator `ṗ = k` in three dimensions.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SingleIntegrator3d;

pub fn single_integrator_3d() -> SingleIntegrator3d {
    SingleIntegrator3d
}

impl SingleIntegrator3d {
    /// Default parameter domain `[-0.5, 0.5]³`.
    pub fn default_k_domain() -> HPolytope {
        HPolytope::from_bounds(&[-0.5; 3], &[0.5; 3]).expect("valid box")
    }
}

impl PlanningModel for SingleIntegrator3d {
    fn layout(&self) -> StateLayout {
        StateLayout::minimal(3, 3, 0)
    }

    fn f_plan(&self, _t: f64, p: &DVector<f64>, k: &DVector<f64>) -> parc_pwa::Result<DVector<f64>> {
        if p.len() != 3 || k.len() != 3 {
            return Err(PwaError::Model("integrator expects p and k in R^3".into()));
        }
        Ok(k.clone())
    }

    fn jacobian(
        &self,
        _t: f64,
        _p: &DVector<f64>,
        _k: &DVector<f64>,
    ) -> parc_pwa::Result<(DMatrix<f64>, DMatrix<f64>)> {
        Ok((DMatrix::zeros(3, 3), DMatrix::identity(3, 3)))
    }

    fn exact_step(&self, _t: f64, dt: f64) -> Option<AffineMap> {
        let mut c = DMatrix::identity(6, 6);
        for i in 0..3 {
            c[(i, 3 + i)] = dt;
        }
        AffineMap::new(c, DVector::zeros(6)).ok()
    }
}
