use std::time::Instant;

use nalgebra::DVector;
use parc_core::{augment, compute_bras, error_sets, find_expert, BrasOptions, BrasResult};
use parc_polytope::{pontryagin_diff, HPolytope};

use super::system::{setup, Setup};
use crate::cli::ComputeArgs;
use crate::error::{CliError, Result};
use crate::io::{write_json, write_meta};

/// Goal the expert must reach: the augmented goal, shrunk by the final error.
fn search_goal(s: &Setup) -> Result<HPolytope> {
    let (goal, _) = augment(&s.scenario)?;
    match &s.profile {
        None => Ok(goal),
        Some(p) => {
            let layout = s.system.layout();
            p.validate(&layout, s.system.num_steps())?;
            let (e_tf, _) = error_sets(p, &layout)?;
            Ok(pontryagin_diff(&goal, &e_tf)?)
        }
    }
}

fn start(s: &Setup) -> Result<DVector<f64>> {
    s.scenario
        .start
        .as_ref()
        .map(|v| DVector::from_column_slice(v))
        .ok_or_else(|| CliError::Usage("the scenario declares no start state".into()))
}

fn expert_state(s: &Setup, args: &ComputeArgs) -> Result<DVector<f64>> {
    let layout = s.system.layout();
    let p0 = start(s)?;
    if let Some(k) = &args.expert_k {
        if k.len() != layout.n_k() {
            return Err(CliError::Usage(format!("--expert-k needs {} values", layout.n_k())));
        }
        return Ok(layout.augment(&p0, &DVector::from_column_slice(k)));
    }
    let goal = search_goal(s)?;
    if goal.is_empty()? {
        // nothing can be reached; any parameter yields the flagged-empty result
        let k = s
            .scenario
            .k_domain
            .chebyshev_center()?
            .map(|(c, _)| c)
            .ok_or_else(|| CliError::Usage("the parameter domain is empty".into()))?;
        return Ok(layout.augment(&p0, &k));
    }
    find_expert(&s.system, &p0, &s.scenario.k_domain, &goal, args.expert_budget, args.seed)?
        .ok_or(CliError::NoExpert(args.expert_budget))
}

fn summary(r: &BrasResult, wall: f64) -> String {
    let hits = r.filtered.iter().filter(|f| f.hit).count();
    format!(
        "reach set: {}\nreach chain: {} sets\nobstacles: {}\nfilter hits: {} of {} pairs\navoid sets: {}\nwall time: {wall:.3} s",
        if r.empty { "empty" } else { "nonempty" },
        r.reach_chain.len(),
        r.n_obstacles,
        hits,
        r.filtered.len(),
        r.avoid.len(),
    )
}

pub fn compute(args: ComputeArgs) -> Result<()> {
    let started = Instant::now();
    let s = setup(&args.system)?;
    let x0 = expert_state(&s, &args)?;
    log::info!("expert start {:?}", x0.as_slice());
    let options = BrasOptions { skip_filter: args.skip_filter };
    let mut result = compute_bras(&s.system, &s.scenario, &x0, s.profile.as_ref(), options)?;
    result.provenance.seed = Some(args.seed);
    write_json(&args.out, &result)?;
    let wall = started.elapsed();
    write_meta(&args.out, "compute", wall)?;
    println!("{}", summary(&result, wall.as_secs_f64()));
    Ok(())
}
