use std::path::Path;
use std::time::Instant;

use parc_core::{estimate_error, TrajectoryPair};
use parc_models::{fit_affine_model, Trajectory};
use parc_polytope::HPolytope;

use super::system::load_scenario;
use crate::cli::{ErrorArgs, FitArgs};
use crate::error::{CliError, Result};
use crate::io::{read_json, write_json, write_meta};

/// Plain trajectories, or the realized halves of trajectory pairs.
fn load_trajectories(path: &Path) -> Result<Vec<Trajectory>> {
    match read_json::<Vec<Trajectory>>(path) {
        Ok(t) => Ok(t),
        Err(CliError::Parse { .. }) => {
            let pairs: Vec<TrajectoryPair> = read_json(path)?;
            Ok(pairs.iter().map(Trajectory::from).collect())
        }
        Err(e) => Err(e),
    }
}

pub fn fit(args: FitArgs) -> Result<()> {
    let started = Instant::now();
    let scenario = load_scenario(&args.scenario, args.tf)?;
    let data = load_trajectories(&args.data)?;
    let (model, _) = fit_affine_model(&data, scenario.layout, args.dt, scenario.tf, scenario.domain()?)?;
    write_json(&args.out, &model)?;
    write_meta(&args.out, "fit", started.elapsed())?;
    println!(
        "fitted {} timesteps from {} trajectories\nmax residual: {:.3e}",
        model.steps.len(),
        data.len(),
        model.max_residual()
    );
    Ok(())
}

pub fn error(args: ErrorArgs) -> Result<()> {
    let started = Instant::now();
    let scenario = load_scenario(&args.scenario, args.tf)?;
    let pairs: Vec<TrajectoryPair> = read_json(&args.pairs)?;
    let valid: HPolytope = match &args.valid_region {
        Some(p) => read_json(p)?,
        None => scenario
            .domain()?
            .ok_or_else(|| CliError::Usage("pass --valid-region or declare a workspace in the scenario".into()))?,
    };
    let profile = estimate_error(&pairs, &valid, args.dt, scenario.tf, scenario.layout.n_w())?;
    write_json(&args.out, &profile)?;
    write_meta(&args.out, "error", started.elapsed())?;
    let fmt = |v: &[f64]| v.iter().map(|e| format!("{e:.4}")).collect::<Vec<_>>().join(", ");
    let mut peak = vec![0.0f64; profile.e_tf.len()];
    for row in &profile.e_int {
        for (p, e) in peak.iter_mut().zip(row) {
            *p = p.max(*e);
        }
    }
    println!(
        "estimated from {} pairs\nfinal-time error: [{}]\npeak interval error: [{}]",
        pairs.len(),
        fmt(&profile.e_tf),
        fmt(&peak)
    );
    Ok(())
}
