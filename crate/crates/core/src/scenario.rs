use nalgebra::{DMatrix, DVector};
use parc_polytope::{project, AffineMap, HPolytope};
use parc_pwa::StateLayout;
use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};

/// Reach-avoid problem data in planning coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub layout: StateLayout,
    /// Goal over the leading `goal_dims` planning coordinates `[w; p_other]`.
    pub goal: HPolytope,
    pub goal_dims: usize,
    /// Obstacles over the workspace coordinates.
    pub obstacles: Vec<HPolytope>,
    #[serde(rename = "K")]
    pub k_domain: HPolytope,
    #[serde(rename = "P_other")]
    pub p_other: HPolytope,
    pub tf: f64,
    /// Workspace domain used when building a PWA system from a named model.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub workspace: Option<HPolytope>,
    /// Planning-state start used by the expert-plan search.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub start: Option<Vec<f64>>,
}

impl Scenario {
    pub fn validate(&self) -> Result<()> {
        let l = &self.layout;
        let bad = |m: String| Err(CoreError::InvalidInput(m));
        if self.goal_dims < l.n_w() || self.goal_dims > l.n_plan() {
            return bad(format!("goal_dims {} outside {}..={}", self.goal_dims, l.n_w(), l.n_plan()));
        }
        if self.goal.dim() != self.goal_dims {
            return bad(format!("goal has dimension {}, goal_dims is {}", self.goal.dim(), self.goal_dims));
        }
        if let Some(i) = self.obstacles.iter().position(|o| o.dim() != l.n_w()) {
            return bad(format!("obstacle {i} is not over the {} workspace coordinates", l.n_w()));
        }
        if self.k_domain.dim() != l.n_k() {
            return bad(format!("K has dimension {}, expected {}", self.k_domain.dim(), l.n_k()));
        }
        if self.p_other.dim() != l.n_p_other() {
            return bad(format!("P_other has dimension {}, expected {}", self.p_other.dim(), l.n_p_other()));
        }
        if let Some(w) = &self.workspace {
            if w.dim() != l.n_w() {
                return bad("workspace domain dimension differs from n_w".into());
            }
        }
        if let Some(s) = &self.start {
            if s.len() != l.n_plan() {
                return bad(format!("start has {} entries, expected {}", s.len(), l.n_plan()));
            }
        }
        if self.tf.is_nan() || self.tf <= 0.0 {
            return bad("tf must be positive".into());
        }
        Ok(())
    }

    /// Augmented-state domain `W × K × P_other`, when a workspace is declared.
    pub fn domain(&self) -> Result<Option<HPolytope>> {
        Ok(self
            .workspace
            .as_ref()
            .map(|w| w.cartesian_product(&self.k_domain).cartesian_product(&self.p_other)))
    }
}

/// Lifts the goal and obstacles to the augmented state `[w; k; p_other]`.
pub fn augment(scenario: &Scenario) -> Result<(HPolytope, Vec<HPolytope>)> {
    scenario.validate()?;
    let l = scenario.layout;
    let extra = scenario.goal_dims - l.n_w();
    let rest = project(&scenario.p_other, extra..l.n_p_other())?;
    let prod = scenario.goal.cartesian_product(&scenario.k_domain).cartesian_product(&rest);
    // prod is ordered [w, p_other[..extra], k, p_other[extra..]]
    let n = l.total();
    let mut order: Vec<usize> = (0..l.n_w()).collect();
    order.extend((0..extra).map(|j| l.n_w() + l.n_k() + j));
    order.extend((0..l.n_k()).map(|j| l.n_w() + j));
    order.extend((extra..l.n_p_other()).map(|j| l.n_w() + l.n_k() + j));
    let mut pi = DMatrix::zeros(n, n);
    for (row, &col) in order.iter().enumerate() {
        pi[(row, col)] = 1.0;
    }
    let goal = prod.inverse_affine_map(&AffineMap::new(pi, DVector::zeros(n))?)?;
    let obstacles = scenario
        .obstacles
        .iter()
        .map(|o| o.cartesian_product(&scenario.k_domain).cartesian_product(&scenario.p_other))
        .collect();
    Ok((goal, obstacles))
}
