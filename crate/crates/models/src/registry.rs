use std::path::PathBuf;
use std::str::FromStr;

use parc_core::Scenario;
use parc_pwa::{Discretization, PlanningModel, PwaSystem};

use crate::dubins::Dubins;
use crate::error::{ModelError, Result};
use crate::integrator::SingleIntegrator3d;
use crate::near_hover::NearHover2d;
use crate::polynomial::{Polynomial, PolynomialParams};
use crate::turtlebot::{affinize_on_grid, dubins_grid, TURTLEBOT_THETA_POINTS};

/// Model selected by name: `dubins`, `integrator3d`, `near-hover`,
/// `polynomial[:t_pk]` or `affine-fit:<file>`.
#[derive(Debug, Clone, PartialEq)]
pub enum ModelSpec {
    Dubins,
    Integrator3d,
    NearHover2d,
    /// Peak time; defaults to a third of the final time.
    Polynomial { t_pk: Option<f64> },
    AffineFit(PathBuf),
}

impl FromStr for ModelSpec {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self> {
        let (name, arg) = match s.split_once(':') {
            Some((n, a)) => (n, Some(a)),
            None => (s, None),
        };
        let none = |m: ModelSpec| if arg.is_none() { Ok(m) } else { Err(ModelError::UnknownModel(s.into())) };
        match name {
            "dubins" => none(ModelSpec::Dubins),
            "integrator3d" => none(ModelSpec::Integrator3d),
            "near-hover" => none(ModelSpec::NearHover2d),
            "polynomial" => {
                let t_pk = arg
                    .map(|a| a.parse::<f64>().map_err(|_| ModelError::UnknownModel(s.into())))
                    .transpose()?;
                Ok(ModelSpec::Polynomial { t_pk })
            }
            "affine-fit" => match arg {
                Some(p) if !p.is_empty() => Ok(ModelSpec::AffineFit(PathBuf::from(p))),
                _ => Err(ModelError::UnknownModel(s.into())),
            },
            _ => Err(ModelError::UnknownModel(s.into())),
        }
    }
}

impl ModelSpec {
    /// Default linearization grid counts over the augmented state.
    pub fn default_grid(&self, scenario: &Scenario) -> Vec<usize> {
        match self {
            ModelSpec::Dubins => dubins_grid(TURTLEBOT_THETA_POINTS),
            _ => vec![1; scenario.layout.total()],
        }
    }

    /// Builds the PWA system over the scenario domain. Fitted models are
    /// loaded by the caller.
    pub fn build(&self, scenario: &Scenario, dt: f64, grid: Option<&[usize]>) -> Result<PwaSystem> {
        let counts = grid.map(<[usize]>::to_vec).unwrap_or_else(|| self.default_grid(scenario));
        let go = |m: &dyn Fn(&[usize]) -> Result<PwaSystem>| m(&counts);
        match self {
            ModelSpec::Dubins => go(&|c| build(&Dubins, scenario, c, dt)),
            ModelSpec::Integrator3d => go(&|c| build(&SingleIntegrator3d, scenario, c, dt)),
            ModelSpec::NearHover2d => go(&|c| build(&NearHover2d::default(), scenario, c, dt)),
            ModelSpec::Polynomial { t_pk } => {
                let params = PolynomialParams::new(t_pk.unwrap_or(scenario.tf / 3.0), scenario.tf)?;
                let model = Polynomial::with_axes(params, scenario.layout.n_w())?;
                go(&|c| build(&model, scenario, c, dt))
            }
            ModelSpec::AffineFit(p) => Err(ModelError::InvalidParams(format!(
                "fitted model {} must be loaded from its file",
                p.display()
            ))),
        }
    }
}

fn build<M: PlanningModel>(model: &M, scenario: &Scenario, counts: &[usize], dt: f64) -> Result<PwaSystem> {
    if model.layout() != scenario.layout {
        return Err(ModelError::InvalidParams(format!(
            "scenario layout {:?} does not match the model layout {:?}",
            scenario.layout,
            model.layout()
        )));
    }
    if counts.len() != scenario.layout.total() {
        return Err(ModelError::InvalidParams(format!(
            "grid has {} counts, the augmented state has {} coordinates",
            counts.len(),
            scenario.layout.total()
        )));
    }
    affinize_on_grid(model, scenario, counts, dt, Discretization::Auto)
}
