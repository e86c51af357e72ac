use nalgebra::{DMatrix, DVector};
use parc_pwa::{PlanningModel, PwaError, StateLayout};

/// Planar near-hover quadrotor on `p = [p_x, p_z, θ, v_x, v_z, ω]` with the
/// propeller forces `k = [F_l, F_r]` held constant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NearHover2d {
    pub mass: f64,
    pub inertia: f64,
    pub arm: f64,
    pub gravity: f64,
}

impl Default for NearHover2d {
    fn default() -> Self {
        Self { mass: 1.0, inertia: 0.01, arm: 0.25, gravity: 9.81 }
    }
}

pub fn near_hover_2d() -> NearHover2d {
    NearHover2d::default()
}

impl NearHover2d {
    /// Per-propeller force that balances gravity.
    pub fn hover_force(&self) -> f64 {
        0.5 * self.mass * self.gravity
    }
}

impl PlanningModel for NearHover2d {
    /// Augmented order `[p_x, p_z, F_l, F_r, θ, v_x, v_z, ω]`; the leading
    /// five coordinates are translation invariant.
    fn layout(&self) -> StateLayout {
        StateLayout::new(2, 2, 4, 5).expect("valid layout")
    }

    fn f_plan(&self, _t: f64, p: &DVector<f64>, k: &DVector<f64>) -> parc_pwa::Result<DVector<f64>> {
        if p.len() != 6 || k.len() != 2 {
            return Err(PwaError::Model("near-hover model expects p in R^6 and k in R^2".into()));
        }
        let (th, f) = (p[2], k[0] + k[1]);
        Ok(DVector::from_vec(vec![
            p[3],
            p[4],
            p[5],
            th.sin() * f / self.mass,
            th.cos() * f / self.mass - self.gravity,
            self.arm / self.inertia * (k[0] - k[1]),
        ]))
    }

    fn jacobian(
        &self,
        t: f64,
        p: &DVector<f64>,
        k: &DVector<f64>,
    ) -> parc_pwa::Result<(DMatrix<f64>, DMatrix<f64>)> {
        self.f_plan(t, p, k)?;
        let (s, c) = p[2].sin_cos();
        let f = k[0] + k[1];
        let m = self.mass;
        let mut jp = DMatrix::zeros(6, 6);
        jp[(0, 3)] = 1.0;
        jp[(1, 4)] = 1.0;
        jp[(2, 5)] = 1.0;
        jp[(3, 2)] = c * f / m;
        jp[(4, 2)] = -s * f / m;
        let g = self.arm / self.inertia;
        let jk = DMatrix::from_row_slice(6, 2, &[0.0, 0.0, 0.0, 0.0, 0.0, 0.0, s / m, s / m, c / m, c / m, g, -g]);
        Ok((jp, jk))
    }
}
