use std::path::Path;

use parc_core::{ErrorProfile, Scenario};
use parc_models::{AffineFit, ModelSpec};
use parc_polytope::{set_tolerances, tolerances};
use parc_pwa::PwaSystem;

use crate::cli::SystemArgs;
use crate::error::{CliError, Result};
use crate::io::read_json;

/// Scenario with an optional final-time override, validated.
pub fn load_scenario(path: &Path, tf: Option<f64>) -> Result<Scenario> {
    let mut scenario: Scenario = read_json(path)?;
    if let Some(tf) = tf {
        scenario.tf = tf;
    }
    scenario.validate()?;
    Ok(scenario)
}

pub fn apply_tolerances(args: &SystemArgs) -> Result<()> {
    let mut tol = tolerances();
    if let Some(lp) = args.tol_lp {
        if !(lp > 0.0 && lp.is_finite()) {
            return Err(CliError::Usage("--tol-lp must be positive".into()));
        }
        tol.lp = lp;
    }
    if let Some(clip) = args.clip {
        if !(clip > 0.0 && clip.is_finite()) {
            return Err(CliError::Usage("--clip must be positive".into()));
        }
        tol.world = clip;
    }
    set_tolerances(tol);
    Ok(())
}

/// Builds the PWA system named by `model` over the scenario domain.
pub fn build_system(scenario: &Scenario, model: &str, dt: f64, grid: Option<&[usize]>) -> Result<PwaSystem> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(CliError::Usage("--dt must be positive".into()));
    }
    match model.parse::<ModelSpec>()? {
        ModelSpec::AffineFit(path) => {
            let fit: AffineFit = read_json(&path)?;
            if fit.layout != scenario.layout {
                return Err(CliError::Usage(format!("{} was fitted for a different layout", path.display())));
            }
            if (fit.dt - dt).abs() > 1e-12 || (fit.tf - scenario.tf).abs() > 1e-9 {
                return Err(CliError::Usage(format!(
                    "{} was fitted with dt = {}, tf = {}",
                    path.display(),
                    fit.dt,
                    fit.tf
                )));
            }
            Ok(fit.to_system(scenario.domain()?)?)
        }
        spec => Ok(spec.build(scenario, dt, grid)?),
    }
}

/// Scenario, system and optional error profile selected by the common flags.
pub struct Setup {
    pub scenario: Scenario,
    pub system: PwaSystem,
    pub profile: Option<ErrorProfile>,
}

pub fn setup(args: &SystemArgs) -> Result<Setup> {
    apply_tolerances(args)?;
    let scenario = load_scenario(&args.scenario, args.tf)?;
    let profile: Option<ErrorProfile> = args.error_profile.as_deref().map(read_json).transpose()?;
    let system = build_system(&scenario, &args.model, args.dt, args.grid.as_deref())?;
    log::info!(
        "system: {} steps, {} regions",
        system.num_steps(),
        system.steps().iter().map(Vec::len).sum::<usize>()
    );
    Ok(Setup { scenario, system, profile })
}
