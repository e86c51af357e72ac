use nalgebra::{DMatrix, DVector};
use parc_polytope::AffineMap;
use parc_pwa::{PlanningModel, PwaError, StateLayout};
use serde::{Deserialize, Serialize};

use crate::error::{ModelError, Result};

const TIME_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolynomialParams {
    /// Time at which the velocity peaks.
    pub t_pk: f64,
    /// Final time, where the velocity returns to zero.
    pub t_f: f64,
}

impl PolynomialParams {
    pub fn new(t_pk: f64, t_f: f64) -> Result<Self> {
        if !(t_pk > 0.0 && t_pk < t_f && t_f.is_finite()) {
            return Err(ModelError::InvalidParams(format!("need 0 < t_pk < t_f, got t_pk {t_pk}, t_f {t_f}")));
        }
        Ok(Self { t_pk, t_f })
    }

    /// Cubic coefficients `[c1, c2, c3, c4]` for `k = [k_v, k_a, k_pk]`.
    pub fn coefficients(&self, k: [f64; 3]) -> [f64; 4] {
        let [kv, ka, kpk] = k;
        let tp = self.t_pk;
        let tr = self.t_f - self.t_pk;
        [
            12.0 / tp.powi(3) * kv + 6.0 / tp.powi(2) * ka - 12.0 / tp.powi(3) * kpk,
            -6.0 / tp.powi(2) * kv - 4.0 / tp * ka + 6.0 / tp.powi(2) * kpk,
            12.0 / tr.powi(3) * kpk,
            -6.0 / tr.powi(2) * kpk,
        ]
    }

    fn check_time(&self, t: f64) -> Result<()> {
        if !(t >= -TIME_TOL && t <= self.t_f + TIME_TOL) {
            return Err(ModelError::OutOfRange { t, tf: self.t_f });
        }
        Ok(())
    }

    /// Velocity at time `t`: it starts at `k_v` with acceleration `k_a`,
    /// peaks at `k_pk` at `t_pk` and returns to rest at `t_f`.
    pub fn velocity(&self, t: f64, k: [f64; 3]) -> Result<f64> {
        self.check_time(t)?;
        let [c1, c2, c3, c4] = self.coefficients(k);
        let [kv, ka, kpk] = k;
        Ok(if t <= self.t_pk {
            c1 * t.powi(3) / 6.0 + c2 * t.powi(2) / 2.0 + ka * t + kv
        } else {
            let s = t - self.t_pk;
            c3 * s.powi(3) / 6.0 + c4 * s.powi(2) / 2.0 + kpk
        })
    }

    /// Displacement from time 0 to `t`.
    pub fn displacement(&self, t: f64, k: [f64; 3]) -> Result<f64> {
        self.check_time(t)?;
        let [c1, c2, c3, c4] = self.coefficients(k);
        let [kv, ka, kpk] = k;
        let rise = |t: f64| c1 * t.powi(4) / 24.0 + c2 * t.powi(3) / 6.0 + ka * t.powi(2) / 2.0 + kv * t;
        Ok(if t <= self.t_pk {
            rise(t)
        } else {
            let s = t - self.t_pk;
            rise(self.t_pk) + c3 * s.powi(4) / 24.0 + c4 * s.powi(3) / 6.0 + kpk * s
        })
    }
}

/// Time-switched polynomial planner, one copy per axis. The workspace is
/// `[p_1 .. p_n]` and the parameters are `[k_v, k_a, k_pk]` per axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Polynomial {
    pub params: PolynomialParams,
    pub axes: usize,
}

pub fn polynomial_model(params: PolynomialParams) -> Polynomial {
    Polynomial { params, axes: 1 }
}

impl Polynomial {
    pub fn with_axes(params: PolynomialParams, axes: usize) -> Result<Self> {
        if axes == 0 {
            return Err(ModelError::InvalidParams("polynomial model needs at least one axis".into()));
        }
        Ok(Self { params, axes })
    }

    fn axis_k(k: &DVector<f64>, a: usize) -> [f64; 3] {
        [k[3 * a], k[3 * a + 1], k[3 * a + 2]]
    }
}

fn model_err(e: ModelError) -> PwaError {
    PwaError::Model(e.to_string())
}

impl PlanningModel for Polynomial {
    fn layout(&self) -> StateLayout {
        StateLayout::minimal(self.axes, 3 * self.axes, 0)
    }

    fn f_plan(&self, t: f64, p: &DVector<f64>, k: &DVector<f64>) -> parc_pwa::Result<DVector<f64>> {
        if p.len() != self.axes || k.len() != 3 * self.axes {
            return Err(PwaError::Model("polynomial state or parameter dimension mismatch".into()));
        }
        let mut v = DVector::zeros(self.axes);
        for a in 0..self.axes {
            v[a] = self.params.velocity(t, Self::axis_k(k, a)).map_err(model_err)?;
        }
        Ok(v)
    }

    fn jacobian(
        &self,
        t: f64,
        p: &DVector<f64>,
        k: &DVector<f64>,
    ) -> parc_pwa::Result<(DMatrix<f64>, DMatrix<f64>)> {
        self.f_plan(t, p, k)?;
        let n = self.axes;
        let mut jk = DMatrix::zeros(n, 3 * n);
        for j in 0..3 {
            let mut e = [0.0; 3];
            e[j] = 1.0;
            let g = self.params.velocity(t, e).map_err(model_err)?;
            for a in 0..n {
                jk[(a, 3 * a + j)] = g;
            }
        }
        Ok((DMatrix::zeros(n, n), jk))
    }

    /// Closed-form displacement over `[t, t + dt]`, linear in `k`.
    fn exact_step(&self, t: f64, dt: f64) -> Option<AffineMap> {
        let n = self.axes;
        let mut c = DMatrix::identity(4 * n, 4 * n);
        for j in 0..3 {
            let mut e = [0.0; 3];
            e[j] = 1.0;
            let g = self.params.displacement(t + dt, e).ok()? - self.params.displacement(t, e).ok()?;
            for a in 0..n {
                c[(a, n + 3 * a + j)] = g;
            }
        }
        AffineMap::new(c, DVector::zeros(4 * n)).ok()
    }
}
