use nalgebra::{dmatrix, dvector, DMatrix, DVector};
use parc_pwa::{PlanningModel, PwaError, StateLayout};

/// Dubins car `ṗ = [v cos θ, v sin θ, ω]` on `p = [p_x, p_y, θ]` with
/// parameters `k = [v, ω]`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Dubins;

pub fn dubins_model() -> Dubins {
    Dubins
}

fn check(p: &DVector<f64>, k: &DVector<f64>) -> parc_pwa::Result<()> {
    if p.len() != 3 || k.len() != 2 {
        return Err(PwaError::Model("Dubins car expects p in R^3 and k in R^2".into()));
    }
    Ok(())
}

impl PlanningModel for Dubins {
    fn layout(&self) -> StateLayout {
        StateLayout::minimal(2, 2, 1)
    }

    fn f_plan(&self, _t: f64, p: &DVector<f64>, k: &DVector<f64>) -> parc_pwa::Result<DVector<f64>> {
        check(p, k)?;
        let (v, w, th) = (k[0], k[1], p[2]);
        Ok(dvector![v * th.cos(), v * th.sin(), w])
    }

    fn jacobian(
        &self,
        _t: f64,
        p: &DVector<f64>,
        k: &DVector<f64>,
    ) -> parc_pwa::Result<(DMatrix<f64>, DMatrix<f64>)> {
        check(p, k)?;
        let (v, th) = (k[0], p[2]);
        let (s, c) = th.sin_cos();
        let jp = dmatrix![0.0, 0.0, -v * s; 0.0, 0.0, v * c; 0.0, 0.0, 0.0];
        let jk = dmatrix![c, 0.0; s, 0.0; 0.0, 1.0];
        Ok((jp, jk))
    }
}
